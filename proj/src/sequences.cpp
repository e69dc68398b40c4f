#include "chirpsense/sequences.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace chirpsense {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ValueMode mode_of(const SequenceSpec& spec) { return spec.mode; }

ComplexSequence apply_mode(ComplexSequence seq) {
    switch (mode_of(seq.spec)) {
        case ValueMode::Complex:
            return seq;
        case ValueMode::RealPart:
            for (auto& s : seq.samples) s = {s.real(), 0.0};
            return seq;
        case ValueMode::ImagPart:
            for (auto& s : seq.samples) s = {s.imag(), 0.0};
            return seq;
    }
    return seq;
}

// atan(1/x) * 10^scale by the alternating series, floor-rounded terms.
ExactInt atan_inv_units(unsigned long x, const ExactInt& one_units) {
    ExactInt pw = one_units / x;
    ExactInt acc = 0;
    unsigned long k = 0;
    while (pw > 0) {
        ExactInt term = pw / (2 * k + 1);
        acc += (k % 2 == 0) ? term : -term;
        pw /= static_cast<unsigned long>(x) * x;
        ++k;
    }
    return acc;
}

} // namespace

ExactInt pi_mantissa(unsigned long scale) {
    const unsigned long work = scale + 10;
    ExactInt one = pow10_int(work);
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    ExactInt pi_units = 16 * atan_inv_units(5, one) - 4 * atan_inv_units(239, one);
    return round_div(pi_units, pow10_int(10));
}

std::string to_string(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::Hoc3: return "hoc3";
        case SequenceKind::SineSweep: return "sine_sweep";
        case SequenceKind::Prbs: return "prbs";
        case SequenceKind::Constant: return "constant";
    }
    return "?";
}

std::string to_string(ValueMode mode) {
    switch (mode) {
        case ValueMode::Complex: return "complex";
        case ValueMode::RealPart: return "real_part";
        case ValueMode::ImagPart: return "imag_part";
    }
    return "?";
}

SequenceKind sequence_kind_from_string(const std::string& s) {
    if (s == "hoc3") return SequenceKind::Hoc3;
    if (s == "sine_sweep" || s == "sine") return SequenceKind::SineSweep;
    if (s == "prbs") return SequenceKind::Prbs;
    if (s == "constant") return SequenceKind::Constant;
    throw std::domain_error("unknown sequence kind '" + s + "'");
}

ValueMode value_mode_from_string(const std::string& s) {
    if (s == "complex") return ValueMode::Complex;
    if (s == "real_part" || s == "real") return ValueMode::RealPart;
    if (s == "imag_part" || s == "imag") return ValueMode::ImagPart;
    throw std::domain_error("unknown value mode '" + s + "'");
}

nlohmann::json SequenceSpec::to_json() const {
    nlohmann::json j;
    j["kind"] = to_string(kind);
    j["length"] = length;
    j["mode"] = to_string(mode);
    if (alpha) {
        j["alpha"] = {{"a", to_decimal(alpha->a())},
                      {"b", to_decimal(alpha->b())},
                      {"c", to_decimal(alpha->c())},
                      {"d", to_decimal(alpha->d())}};
    }
    if (kind == SequenceKind::Prbs) {
        j["lfsr_degree"] = lfsr_degree;
        j["lfsr_taps"] = lfsr_taps;
        j["lfsr_seed"] = lfsr_seed;
    }
    return j;
}

SequenceSpec SequenceSpec::from_json(const nlohmann::json& j) {
    SequenceSpec spec;
    spec.kind = sequence_kind_from_string(j.at("kind").get<std::string>());
    spec.length = j.at("length").get<std::uint64_t>();
    spec.mode = value_mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("alpha")) {
        const auto& a = j.at("alpha");
        spec.alpha = QuadraticIrrational(from_decimal(a.at("a").get<std::string>()),
                                         from_decimal(a.at("b").get<std::string>()),
                                         from_decimal(a.at("c").get<std::string>()),
                                         from_decimal(a.at("d").get<std::string>()));
    }
    if (spec.kind == SequenceKind::Prbs) {
        spec.lfsr_degree = j.at("lfsr_degree").get<unsigned>();
        spec.lfsr_taps = j.at("lfsr_taps").get<std::uint32_t>();
        spec.lfsr_seed = j.at("lfsr_seed").get<std::uint64_t>();
    }
    return spec;
}

SequenceSpec SequenceSpec::hoc3(const QuadraticIrrational& alpha, std::uint64_t length,
                                ValueMode mode) {
    SequenceSpec s;
    s.kind = SequenceKind::Hoc3;
    s.alpha = alpha;
    s.length = length;
    s.mode = mode;
    return s;
}

SequenceSpec SequenceSpec::sine_sweep(const QuadraticIrrational& alpha, std::uint64_t length,
                                      ValueMode mode) {
    SequenceSpec s = hoc3(alpha, length, mode);
    s.kind = SequenceKind::SineSweep;
    return s;
}

SequenceSpec SequenceSpec::prbs(unsigned degree, std::uint32_t taps, std::uint64_t length,
                                std::uint64_t seed) {
    SequenceSpec s;
    s.kind = SequenceKind::Prbs;
    s.length = length;
    s.lfsr_degree = degree;
    s.lfsr_taps = taps;
    s.lfsr_seed = seed;
    s.mode = ValueMode::RealPart;
    return s;
}

SequenceSpec SequenceSpec::prbs15(std::uint64_t length) {
    return prbs(15, 1u << 14, length, 1); // x^15 + x^14 + 1, seed 0x1
}

SequenceSpec SequenceSpec::constant(std::uint64_t length) {
    SequenceSpec s;
    s.kind = SequenceKind::Constant;
    s.length = length;
    s.mode = ValueMode::RealPart;
    return s;
}

std::complex<double> ComplexSequence::at(std::int64_t t) const {
    if (!covers(t, t)) throw std::domain_error("ComplexSequence::at: index out of range");
    return samples[static_cast<std::size_t>(t - start_index)];
}

bool ComplexSequence::covers(std::int64_t lo, std::int64_t hi) const {
    return lo >= start_index && hi <= last_index() && lo <= hi;
}

ComplexSequence gen_hoc3(const QuadraticIrrational& alpha, std::int64_t t_from,
                         std::int64_t t_to, ValueMode mode) {
    if (t_from < 0 || t_to < t_from) throw std::domain_error("gen_hoc3: need 0 <= t_from <= t_to");
    ExactInt tmax(static_cast<long>(t_to));
    ExactInt max_mult = tmax * tmax * tmax;
    if (max_mult < 1) max_mult = 1;
    // Naive double alpha*t^3 loses the whole fractional part beyond t ~ 1e5;
    // the phase comes from exact integer arithmetic instead.
    ScaledFracEvaluator ev(alpha, max_mult, 30);

    ComplexSequence seq;
    seq.spec = SequenceSpec::hoc3(alpha, static_cast<std::uint64_t>(t_to - t_from + 1), mode);
    seq.start_index = t_from;
    seq.samples.reserve(static_cast<std::size_t>(t_to - t_from + 1));
    for (std::int64_t t = t_from; t <= t_to; ++t) {
        double ph;
        if (t == 0) {
            ph = 0.0;
        } else {
            ExactInt m(static_cast<long>(t));
            ph = ev.frac_double(m * m * m);
        }
        seq.samples.emplace_back(std::cos(kTwoPi * ph), std::sin(kTwoPi * ph));
    }
    return apply_mode(std::move(seq));
}

ComplexSequence gen_sine_sweep(const QuadraticIrrational& alpha, std::int64_t t_from,
                               std::int64_t t_to, ValueMode mode) {
    if (t_from < 0 || t_to < t_from)
        throw std::domain_error("gen_sine_sweep: need 0 <= t_from <= t_to");
    ExactInt tmax(static_cast<long>(t_to));
    ExactInt max_mult = tmax * tmax;
    if (max_mult < 1) max_mult = 1;

    // mu = alpha / (2 pi) as a fixed-point mantissa; phase(t) = frac(mu t^2).
    const unsigned long scale =
        static_cast<unsigned long>(digits10(max_mult)) + 30 + 10;
    CertifiedFixedPoint av = alpha.eval(scale + 8);
    ExactInt two_pi = 2 * pi_mantissa(scale + 8);
    ExactInt mu = floor_div(av.mantissa() * pow10_int(scale), two_pi);
    ExactInt ten_scale = pow10_int(scale);

    ComplexSequence seq;
    seq.spec = SequenceSpec::sine_sweep(alpha, static_cast<std::uint64_t>(t_to - t_from + 1),
                                        mode);
    seq.start_index = t_from;
    seq.samples.reserve(static_cast<std::size_t>(t_to - t_from + 1));
    for (std::int64_t t = t_from; t <= t_to; ++t) {
        ExactInt m(static_cast<long>(t));
        ExactInt f;
        ExactInt prod = mu * m * m;
        mpz_fdiv_r(f.get_mpz_t(), prod.get_mpz_t(), ten_scale.get_mpz_t());
        mpf_class frac_val(f, 96);
        double ph = mpf_class(frac_val / mpf_class(ten_scale, 96)).get_d();
        seq.samples.emplace_back(std::cos(kTwoPi * ph), std::sin(kTwoPi * ph));
    }
    return apply_mode(std::move(seq));
}

namespace {

struct Lfsr {
    unsigned degree;
    std::uint32_t poly_mask; // taps | 1: bit i => x^i coefficient, i < degree
    std::uint32_t state;

    std::uint32_t step() {
        std::uint32_t out = state & 1u;
        std::uint32_t newbit =
            static_cast<std::uint32_t>(std::popcount(state & poly_mask) & 1);
        state = (state >> 1) | (newbit << (degree - 1));
        return out;
    }
};

void validate_prbs(unsigned degree, std::uint32_t taps, std::uint64_t seed) {
    if (degree < 2 || degree > 20)
        throw std::domain_error("gen_prbs: degree must be in [2, 20]");
    if (seed == 0) throw std::domain_error("gen_prbs: zero seed is the absorbing state");
    const std::uint32_t state_mask = (1u << degree) - 1;
    if (seed > state_mask) throw std::domain_error("gen_prbs: seed exceeds state width");
    if ((taps & ~static_cast<std::uint32_t>(state_mask & ~1u)) != 0)
        throw std::domain_error("gen_prbs: taps outside exponents 1..degree-1");
    // Full-period check certifies the polynomial is primitive.
    Lfsr reg{degree, taps | 1u, 1u};
    const std::uint64_t want = (1ull << degree) - 1;
    std::uint64_t period = 0;
    do {
        reg.step();
        ++period;
        if (period > want) break;
    } while (reg.state != 1u);
    if (period != want)
        throw std::domain_error("gen_prbs: taps are not primitive (period " +
                                std::to_string(period) + " != " + std::to_string(want) + ")");
}

} // namespace

ComplexSequence gen_prbs(unsigned degree, std::uint32_t taps, std::uint64_t length,
                         std::uint64_t seed_state) {
    validate_prbs(degree, taps, seed_state);
    if (length == 0) throw std::domain_error("gen_prbs: length must be >= 1");
    Lfsr reg{degree, taps | 1u, static_cast<std::uint32_t>(seed_state)};
    ComplexSequence seq;
    seq.spec = SequenceSpec::prbs(degree, taps, length, seed_state);
    seq.start_index = 0;
    seq.samples.reserve(length);
    for (std::uint64_t i = 0; i < length; ++i) {
        std::uint32_t bit = reg.step();
        seq.samples.emplace_back(bit ? -1.0 : 1.0, 0.0);
    }
    return seq;
}

ComplexSequence generate(const SequenceSpec& spec, std::int64_t t_from, std::int64_t t_to) {
    switch (spec.kind) {
        case SequenceKind::Hoc3:
            if (!spec.alpha) throw std::domain_error("generate: hoc3 requires alpha");
            return gen_hoc3(*spec.alpha, t_from, t_to, spec.mode);
        case SequenceKind::SineSweep:
            if (!spec.alpha) throw std::domain_error("generate: sine_sweep requires alpha");
            return gen_sine_sweep(*spec.alpha, t_from, t_to, spec.mode);
        case SequenceKind::Prbs: {
            if (t_from < 0 || t_to < t_from)
                throw std::domain_error("generate: need 0 <= t_from <= t_to");
            ComplexSequence full = gen_prbs(spec.lfsr_degree, spec.lfsr_taps,
                                            static_cast<std::uint64_t>(t_to) + 1,
                                            spec.lfsr_seed);
            ComplexSequence out;
            out.spec = spec;
            out.start_index = t_from;
            out.samples.assign(full.samples.begin() + t_from, full.samples.end());
            return out;
        }
        case SequenceKind::Constant: {
            if (t_from < 0 || t_to < t_from)
                throw std::domain_error("generate: need 0 <= t_from <= t_to");
            ComplexSequence out;
            out.spec = spec;
            out.start_index = t_from;
            out.samples.assign(static_cast<std::size_t>(t_to - t_from + 1), {1.0, 0.0});
            return out;
        }
    }
    throw std::domain_error("generate: unknown kind");
}

ComplexSequence generate(const SequenceSpec& spec) {
    if (spec.length == 0) throw std::domain_error("generate: spec.length must be >= 1");
    return generate(spec, 0, static_cast<std::int64_t>(spec.length) - 1);
}

ComplexSequence apply_doppler(const ComplexSequence& seq, double f) {
    ComplexSequence out = seq;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        double t = static_cast<double>(out.start_index + static_cast<std::int64_t>(i));
        double ang = kTwoPi * f * t;
        out.samples[i] *= std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return out;
}

ComplexSequence real_part(const ComplexSequence& seq) {
    ComplexSequence out = seq;
    out.spec.mode = ValueMode::RealPart;
    for (auto& s : out.samples) s = {s.real(), 0.0};
    return out;
}

ComplexSequence imag_part(const ComplexSequence& seq) {
    ComplexSequence out = seq;
    out.spec.mode = ValueMode::ImagPart;
    for (auto& s : out.samples) s = {s.imag(), 0.0};
    return out;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json sequence_header(const ComplexSequence& seq) {
    nlohmann::json j;
    j["spec"] = seq.spec.to_json();
    j["start_index"] = seq.start_index;
    j["count"] = seq.samples.size();
    return j;
}

} // namespace

void write_sequence_csv(const ComplexSequence& seq, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "# " << sequence_header(seq).dump() << "\n";
    out << "t,re,im\n";
    for (std::size_t i = 0; i < seq.samples.size(); ++i) {
        out << (seq.start_index + static_cast<std::int64_t>(i)) << ','
            << format_double(seq.samples[i].real()) << ','
            << format_double(seq.samples[i].imag()) << "\n";
    }
}

void write_sequence_binary(const ComplexSequence& seq, const std::string& path) {
    static_assert(std::endian::native == std::endian::little,
                  "binary export assumes a little-endian host");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << sequence_header(seq).dump() << "\n";
    for (const auto& s : seq.samples) {
        double re = s.real(), im = s.imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(double));
        out.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
}

ComplexSequence read_sequence_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::string header;
    std::getline(in, header);
    nlohmann::json j = nlohmann::json::parse(header);
    ComplexSequence seq;
    seq.spec = SequenceSpec::from_json(j.at("spec"));
    seq.start_index = j.at("start_index").get<std::int64_t>();
    std::uint64_t count = j.at("count").get<std::uint64_t>();
    seq.samples.resize(count);
    for (auto& s : seq.samples) {
        double re, im;
        in.read(reinterpret_cast<char*>(&re), sizeof(double));
        in.read(reinterpret_cast<char*>(&im), sizeof(double));
        if (!in) throw std::runtime_error("truncated sequence file '" + path + "'");
        s = {re, im};
    }
    return seq;
}

} // namespace chirpsense
