#pragma once

#include "chirpsense/quadratic.hpp"

#include <json.hpp>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chirpsense {

enum class SequenceKind { Hoc3, SineSweep, Prbs, Constant };
enum class ValueMode { Complex, RealPart, ImagPart };

std::string to_string(SequenceKind kind);
std::string to_string(ValueMode mode);
SequenceKind sequence_kind_from_string(const std::string& s);
ValueMode value_mode_from_string(const std::string& s);

// Everything needed to regenerate a probing sequence deterministically.
//
// PRBS taps mask: bit i (0 < i < degree) set means the characteristic
// polynomial contains x^i; x^degree and the constant term are implicit.
// Default degree-15 polynomial x^15 + x^14 + 1 <=> taps = 1 << 14.
struct SequenceSpec {
    SequenceKind kind = SequenceKind::Hoc3;
    std::optional<QuadraticIrrational> alpha; // chirp kinds
    std::uint64_t length = 0;
    unsigned lfsr_degree = 0;
    std::uint32_t lfsr_taps = 0;
    std::uint64_t lfsr_seed = 1;
    ValueMode mode = ValueMode::Complex;

    nlohmann::json to_json() const;
    static SequenceSpec from_json(const nlohmann::json& j);

    static SequenceSpec hoc3(const QuadraticIrrational& alpha, std::uint64_t length,
                             ValueMode mode = ValueMode::Complex);
    static SequenceSpec sine_sweep(const QuadraticIrrational& alpha, std::uint64_t length,
                                   ValueMode mode = ValueMode::Complex);
    static SequenceSpec prbs(unsigned degree, std::uint32_t taps, std::uint64_t length,
                             std::uint64_t seed = 1);
    static SequenceSpec prbs15(std::uint64_t length); // pinned default taps/seed
    static SequenceSpec constant(std::uint64_t length);
};

struct ComplexSequence {
    std::vector<std::complex<double>> samples;
    SequenceSpec spec;
    std::int64_t start_index = 0;

    std::complex<double> at(std::int64_t t) const;
    bool covers(std::int64_t lo, std::int64_t hi) const;
    std::int64_t last_index() const {
        return start_index + static_cast<std::int64_t>(samples.size()) - 1;
    }
};

// u(t) = exp(i 2 pi frac(alpha t^3)); phases certified, one float exp per sample.
ComplexSequence gen_hoc3(const QuadraticIrrational& alpha, std::int64_t t_from,
                         std::int64_t t_to, ValueMode mode = ValueMode::Complex);

// u(t) = exp(i alpha t^2); alpha/(2 pi) reduced mod 1 on the certified path.
ComplexSequence gen_sine_sweep(const QuadraticIrrational& alpha, std::int64_t t_from,
                               std::int64_t t_to, ValueMode mode = ValueMode::Complex);

// Maximal-length +-1 LFSR stream; taps must give the full period 2^degree - 1
// (checked at construction, degree <= 20).
ComplexSequence gen_prbs(unsigned degree, std::uint32_t taps, std::uint64_t length,
                         std::uint64_t seed_state);

// Dispatch on spec.kind for indices [t_from, t_to].
ComplexSequence generate(const SequenceSpec& spec, std::int64_t t_from, std::int64_t t_to);
// Convenience: indices [0, spec.length - 1].
ComplexSequence generate(const SequenceSpec& spec);

// samples[t] *= exp(i 2 pi f t), t the absolute index.
ComplexSequence apply_doppler(const ComplexSequence& seq, double f);

ComplexSequence real_part(const ComplexSequence& seq);
ComplexSequence imag_part(const ComplexSequence& seq);

// CSV: "# <spec json>" header line, then t,re,im rows.
void write_sequence_csv(const ComplexSequence& seq, const std::string& path);
// Binary: one JSON header line, then little-endian float64 (re, im) pairs.
void write_sequence_binary(const ComplexSequence& seq, const std::string& path);
ComplexSequence read_sequence_binary(const std::string& path);

// pi * 10^scale with error <= 1 unit (Machin arctan series, exact integers).
ExactInt pi_mantissa(unsigned long scale);

} // namespace chirpsense
