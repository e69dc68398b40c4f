#include "chirpsense/commands.hpp"

#include "chirpsense/acf.hpp"
#include "chirpsense/continued_fraction.hpp"
#include "chirpsense/errors.hpp"
#include "chirpsense/io.hpp"
#include "chirpsense/ostrowski.hpp"
#include "chirpsense/rng.hpp"
#include "chirpsense/sensing.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace chirpsense {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

void check_squarefree_cli(const ExactInt& d) {
    if (d > ExactInt(1000000000000L))
        throw std::domain_error("alpha: d too large to validate squarefreeness (max 1e12)");
    std::uint64_t v = to_uint64(d);
    for (std::uint64_t i = 2; i * i <= v; ++i)
        if (v % (i * i) == 0)
            throw std::domain_error("alpha: d = " + to_decimal(d) + " is not squarefree");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (const std::string& tok : split(text, ','))
        out.push_back(static_cast<std::size_t>(std::stoull(tok)));
    return out;
}

} // namespace

QuadraticIrrational parse_alpha(const std::string& text) {
    if (text == "golden") return QuadraticIrrational::golden();
    if (text == "sqrt2") return QuadraticIrrational::sqrt2();
    if (text == "sqrt3") return QuadraticIrrational::sqrt3();
    if (text == "golden-1") return QuadraticIrrational(-1, 1, 2, 5);
    if (text == "sqrt2-1") return QuadraticIrrational(-1, 1, 1, 2);
    if (text == "sqrt3-1") return QuadraticIrrational(-1, 1, 1, 3);
    std::vector<std::string> parts = split(text, '/');
    if (parts.size() != 4)
        throw std::domain_error("alpha '" + text +
                                "': expected a preset name or a/b/c/d quadruple");
    QuadraticIrrational q(from_decimal(parts[0]), from_decimal(parts[1]),
                          from_decimal(parts[2]), from_decimal(parts[3]));
    check_squarefree_cli(q.d());
    return q;
}

SequenceSpec parse_seq_spec(const std::string& text, ValueMode mode, std::uint64_t length) {
    std::vector<std::string> parts = split(text, ':');
    if (parts.empty()) throw std::domain_error("empty sequence spec");
    const std::string& kind = parts[0];
    if (kind == "hoc3" || kind == "sine" || kind == "sine_sweep") {
        if (parts.size() != 2)
            throw std::domain_error("spec '" + text + "': expected <kind>:<alpha>");
        QuadraticIrrational alpha = parse_alpha(parts[1]);
        return kind == "hoc3" ? SequenceSpec::hoc3(alpha, length, mode)
                              : SequenceSpec::sine_sweep(alpha, length, mode);
    }
    if (kind == "prbs") {
        if (parts.size() == 1) return SequenceSpec::prbs15(length);
        unsigned degree = static_cast<unsigned>(std::stoul(parts[1]));
        if (parts.size() == 2) {
            if (degree == 15) return SequenceSpec::prbs15(length);
            throw std::domain_error("spec '" + text + "': taps required for degree != 15");
        }
        std::uint32_t taps = static_cast<std::uint32_t>(std::stoul(parts[2], nullptr, 0));
        std::uint64_t seed = parts.size() > 3 ? std::stoull(parts[3], nullptr, 0) : 1;
        return SequenceSpec::prbs(degree, taps, length, seed);
    }
    if (kind == "constant") return SequenceSpec::constant(length);
    throw std::domain_error("unknown sequence spec kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

void exec_gen(const json& config) {
    std::uint64_t length = config.at("length").get<std::uint64_t>();
    if (length == 0) throw std::domain_error("gen: --length must be >= 1");
    ValueMode mode = value_mode_from_string(config.at("mode").get<std::string>());
    SequenceSpec spec =
        parse_seq_spec(config.at("spec").get<std::string>(), mode, length);
    ComplexSequence seq = generate(spec);

    std::string out = config.at("out").get<std::string>();
    std::string csv = out + ".csv";
    std::string bin = out + ".bin";
    write_sequence_csv(seq, csv);
    write_sequence_binary(seq, bin);
    RunManifest{"gen", config, 0}.write(out, {csv, bin});
    std::cout << "wrote " << csv << " and " << bin << " (" << seq.samples.size()
              << " samples)\n";
}

// ---------------------------------------------------------------------------
// acf
// ---------------------------------------------------------------------------

void exec_acf(const json& config) {
    std::vector<std::size_t> lengths;
    for (const auto& v : config.at("lengths")) lengths.push_back(v.get<std::size_t>());
    if (lengths.empty()) throw std::domain_error("acf: no lengths given");
    ValueMode mode = value_mode_from_string(config.at("mode").get<std::string>());
    std::vector<std::string> spec_strings;
    for (const auto& v : config.at("specs")) spec_strings.push_back(v.get<std::string>());
    if (spec_strings.empty()) throw std::domain_error("acf: no sequence specs given");

    std::size_t workers = config.at("workers").get<std::size_t>();
    std::string out = config.at("out").get<std::string>();
    std::vector<std::vector<CurvePoint>> curves;
    std::vector<std::string> files;
    json report;
    report["schema_version"] = kSchemaVersion;
    report["lengths"] = lengths;
    report["curves"] = json::array();

    for (std::size_t i = 0; i < spec_strings.size(); ++i) {
        SequenceSpec spec = parse_seq_spec(spec_strings[i], mode, lengths.back() + 1);
        std::vector<CurvePoint> curve = worst_case_curve(spec, lengths, workers);
        curves.push_back(curve);

        std::string path = out + "_" + std::to_string(i) + ".csv";
        std::ofstream f = open_out(path);
        f << "n,max_ratio,argmax_tau\n";
        for (const CurvePoint& pt : curve)
            f << pt.n << ',' << format_double(pt.max_ratio) << ',' << pt.argmax_tau << "\n";
        files.push_back(path);

        json jc;
        jc["spec"] = spec_strings[i];
        jc["points"] = json::array();
        for (const CurvePoint& pt : curve)
            jc["points"].push_back(
                {{"n", pt.n}, {"max_ratio", pt.max_ratio}, {"argmax_tau", pt.argmax_tau}});
        if (curve.size() >= 4) {
            DecayFit fit = fit_decay(curve);
            jc["fit"] = {{"C", fit.C}, {"gamma", fit.gamma}, {"residual", fit.residual}};
        }
        report["curves"].push_back(jc);
    }

    std::string combined = out + "_combined.csv";
    {
        std::ofstream f = open_out(combined);
        f << "n";
        for (const std::string& s : spec_strings) {
            std::string name = s;
            for (char& ch : name)
                if (ch == ',' || ch == ':') ch = '_';
            f << ',' << name;
        }
        f << "\n";
        for (std::size_t li = 0; li < lengths.size(); ++li) {
            f << lengths[li];
            for (const auto& curve : curves) f << ',' << format_double(curve[li].max_ratio);
            f << "\n";
        }
    }
    files.push_back(combined);

    std::string jpath = out + ".json";
    write_json(report, jpath);
    files.push_back(jpath);
    RunManifest{"acf", config, 0}.write(out, files);
    std::cout << "wrote " << combined << " (" << lengths.size() << " lengths x "
              << spec_strings.size() << " specs)\n";
}

// ---------------------------------------------------------------------------
// rip
// ---------------------------------------------------------------------------

void exec_rip(const json& config) {
    std::size_t n = config.at("n").get<std::size_t>();
    std::size_t p = config.at("p").get<std::size_t>();
    ToeplitzKind kind = toeplitz_kind_from_string(config.at("kind").get<std::string>());
    ValueMode mode = value_mode_from_string(config.at("mode").get<std::string>());
    std::size_t subsets = config.at("subsets").get<std::size_t>();
    std::uint64_t seed = config.at("seed").get<std::uint64_t>();
    SequenceSpec spec = parse_seq_spec(config.at("spec").get<std::string>(), mode, 1);

    SensingMatrix u = build_toeplitz(spec, n, p, kind);
    RipReport rep = rip_report(u, subsets, seed);

    json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = n;
    j["p"] = p;
    j["kind"] = to_string(kind);
    j["q_certified"] = rep.q;
    j["r_bound"] = rep.r_bound;
    j["certified"] = rep.certified;
    j["delta_q_estimate"] = rep.delta_q_estimate;
    j["sampled"] = json::array();
    for (const SampledSubset& s : rep.sampled) {
        j["sampled"].push_back({{"subset", s.subset},
                                {"lambda_min", s.lambda_min},
                                {"lambda_max", s.lambda_max},
                                {"r_row_max", s.r_row_max}});
    }

    std::string out = config.at("out").get<std::string>();
    std::string jpath = out + ".json";
    write_json(j, jpath);
    RunManifest{"rip", config, seed}.write(out, {jpath});
    std::cout << "certified RIP order q = " << rep.q << " (R = " << rep.r_bound << ") -> "
              << jpath << "\n";
}

// ---------------------------------------------------------------------------
// cond
// ---------------------------------------------------------------------------

void exec_cond(const json& config) {
    CondExperiment exp;
    for (const auto& v : config.at("n_values")) exp.n_values.push_back(v.get<std::size_t>());
    exp.p_rule = config.at("p_rule").get<std::string>();
    exp.q_rule = config.at("q_rule").get<std::string>();
    exp.trials = config.at("trials").get<std::size_t>();
    exp.rng_seed = config.at("seed").get<std::uint64_t>();
    exp.workers = config.at("workers").get<std::size_t>();
    ValueMode mode = value_mode_from_string(config.at("mode").get<std::string>());
    SequenceSpec spec = parse_seq_spec(config.at("spec").get<std::string>(), mode, 1);

    CondResults results = cond_mc(exp, spec);

    std::string out = config.at("out").get<std::string>();
    std::string csv = out + ".csv";
    {
        std::ofstream f = open_out(csv);
        f << "n,trial,cond,cond_eig\n";
        for (const CondRow& r : results.rows)
            f << r.n << ',' << r.trial << ',' << format_double(r.cond_sv) << ','
              << format_double(r.cond_eig) << "\n";
    }
    json j;
    j["schema_version"] = kSchemaVersion;
    j["per_n"] = json::array();
    for (const CondSummary& s : results.summary)
        j["per_n"].push_back({{"n", s.n},
                              {"trials", s.trials},
                              {"min", s.min},
                              {"median", s.median},
                              {"max", s.max},
                              {"mean", s.mean}});
    std::string jpath = out + "_summary.json";
    write_json(j, jpath);
    RunManifest{"cond", config, exp.rng_seed}.write(out, {csv, jpath});
    std::cout << "wrote " << csv << " (" << results.rows.size() << " rows)\n";
}

// ---------------------------------------------------------------------------
// numtheory
// ---------------------------------------------------------------------------

void exec_numtheory(const json& config) {
    std::string sub = config.at("subcommand").get<std::string>();
    std::string out = config.at("out").get<std::string>();
    json j;
    j["schema_version"] = kSchemaVersion;
    j["diagnostic"] = sub;
    std::vector<std::string> files;

    if (sub == "convergents") {
        QuadraticIrrational alpha = parse_alpha(config.at("alpha").get<std::string>());
        std::size_t k = config.at("k").get<std::size_t>();
        CFExpansion cf = expand_cf(alpha, k);
        std::vector<Convergent> conv = convergents(cf, k);
        j["a0"] = to_decimal(cf.a0);
        j["quotients"] = json::array();
        for (const auto& q : cf.partial_quotients) j["quotients"].push_back(to_decimal(q));
        if (cf.period_start)
            j["period"] = {{"start", *cf.period_start}, {"length", *cf.period_length}};
        j["convergents"] = json::array();
        std::cout << "k\tA_k\tB_k\tD_k\n";
        for (const Convergent& c : conv) {
            j["convergents"].push_back({{"k", c.k},
                                        {"A", to_decimal(c.A)},
                                        {"B", to_decimal(c.B)},
                                        {"D", c.D_eval.value()}});
            std::cout << c.k << '\t' << to_decimal(c.A) << '\t' << to_decimal(c.B) << '\t'
                      << c.D_eval.value() << "\n";
        }
    } else if (sub == "ostrowski") {
        QuadraticIrrational beta = parse_alpha(config.at("beta").get<std::string>());
        ExactInt m = from_decimal(config.at("m").get<std::string>());
        OstrowskiBasis basis(beta, m);
        OstrowskiRep rep = ostrowski(m, basis);
        j["m"] = to_decimal(m);
        j["coeffs"] = json::array();
        j["terms"] = json::array();
        std::cout << "m = " << to_decimal(m) << " decomposes over B_j as:\n";
        for (std::size_t i = 0; i < rep.coeffs.size(); ++i) {
            j["coeffs"].push_back(to_decimal(rep.coeffs[i]));
            if (rep.coeffs[i] != 0) {
                j["terms"].push_back({{"j", i},
                                      {"c", to_decimal(rep.coeffs[i])},
                                      {"B", to_decimal(basis.denominators()[i])}});
                std::cout << "  c_" << (i + 1) << " = " << to_decimal(rep.coeffs[i])
                          << "  (B_" << i << " = " << to_decimal(basis.denominators()[i])
                          << ")\n";
            }
        }
        j["type"] = type_of(rep);
    } else if (sub == "types") {
        QuadraticIrrational beta = parse_alpha(config.at("beta").get<std::string>());
        ExactInt n = from_decimal(config.at("n").get<std::string>());
        TypeProfile prof = type_profile(n, beta);
        j["n"] = to_decimal(n);
        j["max_type"] = prof.max_type;
        j["histogram"] = json::array();
        std::string csv = out + "_histogram.csv";
        std::ofstream f = open_out(csv);
        f << "type,first_coeff,count\n";
        for (const auto& [key, count] : prof.histogram) {
            f << key.first << ',' << key.second << ',' << count << "\n";
            j["histogram"].push_back(
                {{"type", key.first}, {"first_coeff", key.second}, {"count", count}});
        }
        files.push_back(csv);
        std::cout << "max type gamma_n^* = " << prof.max_type << " over 1.."
                  << to_decimal(n) << "\n";
    } else if (sub == "phi") {
        QuadraticIrrational alpha = parse_alpha(config.at("alpha").get<std::string>());
        ExactInt n = from_decimal(config.at("n").get<std::string>());
        ExactInt tau_from = from_decimal(config.at("tau_from").get<std::string>());
        ExactInt tau_to = from_decimal(config.at("tau_to").get<std::string>());
        std::vector<std::string> lam = split(config.at("lambda").get<std::string>(), '/');
        ExactInt lam_num = from_decimal(lam.at(0));
        ExactInt lam_den = lam.size() > 1 ? from_decimal(lam.at(1)) : ExactInt(1);
        std::string csv = out + "_phi.csv";
        std::ofstream f = open_out(csv);
        f << "tau,phi\n";
        j["rows"] = json::array();
        for (ExactInt tau = tau_from; tau <= tau_to; ++tau) {
            double v = phi_tau(tau, alpha, n, lam_num, lam_den);
            f << to_decimal(tau) << ',' << format_double(v) << "\n";
            j["rows"].push_back({{"tau", to_decimal(tau)}, {"phi", v}});
        }
        files.push_back(csv);
        std::cout << "wrote " << csv << "\n";
    } else if (sub == "khinchin") {
        QuadraticIrrational alpha = parse_alpha(config.at("alpha").get<std::string>());
        ExactInt n = from_decimal(config.at("n").get<std::string>());
        KhinchinResult r = khinchin_min(alpha, n);
        j["c_min"] = r.c_min.value();
        j["argmin_j"] = to_decimal(r.argmin_j);
        std::cout << "min_{1<=j<=" << to_decimal(n) << "} j*||j*alpha|| = " << r.c_min.value()
                  << " at j = " << to_decimal(r.argmin_j) << "\n";
    } else {
        throw std::domain_error("numtheory: unknown subcommand '" + sub + "'");
    }

    std::string jpath = out + ".json";
    write_json(j, jpath);
    files.push_back(jpath);
    RunManifest{"numtheory", config, 0}.write(out, files);
}

// ---------------------------------------------------------------------------
// identify
// ---------------------------------------------------------------------------

void exec_identify(const json& config) {
    std::size_t n = config.at("n").get<std::size_t>();
    std::size_t p = config.at("p").get<std::size_t>();
    std::size_t k = config.at("k").get<std::size_t>();
    double sigma = config.at("sigma").get<double>();
    std::size_t trials = config.at("trials").get<std::size_t>();
    std::uint64_t seed = config.at("seed").get<std::uint64_t>();
    ValueMode mode = value_mode_from_string(config.at("mode").get<std::string>());
    SequenceSpec spec = parse_seq_spec(config.at("spec").get<std::string>(), mode, 1);
    if (k > std::min(n, p)) throw std::domain_error("identify: k must be <= min(n, p)");
    if (trials == 0) throw std::domain_error("identify: trials must be >= 1");

    SensingMatrix u = build_toeplitz(spec, n, p, ToeplitzKind::SteadyState);

    json per_trial = json::array();
    std::size_t exact_count = 0;
    std::vector<double> rel_errs;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng rng(derive_seed(seed, 0x49444E54ULL, trial));
        FirSystem sys;
        sys.p = p;
        sys.g.assign(p, 0.0);
        sys.support = rng.sample_without_replacement(p, k);
        for (std::size_t idx : sys.support) {
            double mag = 0.5 + rng.next_double();
            sys.g[idx] = (rng.next_u64() & 1) ? mag : -mag;
        }
        sys.noise_sigma = sigma;
        std::vector<std::complex<double>> y =
            simulate_output(u, sys, derive_seed(seed, 0x4E4F4953ULL, trial));
        OmpResult rec = omp_recover(u, y, k);

        bool exact = rec.estimate.support == sys.support;
        if (exact) ++exact_count;
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            num += (rec.estimate.g[i] - sys.g[i]) * (rec.estimate.g[i] - sys.g[i]);
            den += sys.g[i] * sys.g[i];
        }
        double rel = std::sqrt(num / den);
        rel_errs.push_back(rel);
        per_trial.push_back({{"trial", trial},
                             {"support_exact", exact},
                             {"rel_coef_error", rel},
                             {"residual_norm", rec.residual_norm}});
    }
    std::sort(rel_errs.begin(), rel_errs.end());
    double median_rel = rel_errs.size() % 2 == 1
                            ? rel_errs[rel_errs.size() / 2]
                            : 0.5 * (rel_errs[rel_errs.size() / 2 - 1] +
                                     rel_errs[rel_errs.size() / 2]);

    json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = n;
    j["p"] = p;
    j["k"] = k;
    j["sigma"] = sigma;
    j["trials"] = trials;
    j["exact_support_fraction"] =
        static_cast<double>(exact_count) / static_cast<double>(trials);
    j["median_rel_coef_error"] = median_rel;
    j["per_trial"] = per_trial;

    std::string out = config.at("out").get<std::string>();
    std::string jpath = out + ".json";
    write_json(j, jpath);
    RunManifest{"identify", config, seed}.write(out, {jpath});
    std::cout << "exact support " << exact_count << "/" << trials
              << ", median relative coefficient error " << median_rel << " -> " << jpath
              << "\n";
}

// ---------------------------------------------------------------------------
// replay
// ---------------------------------------------------------------------------

namespace {

void exec_by_name(const std::string& command, const json& config) {
    if (command == "gen") return exec_gen(config);
    if (command == "acf") return exec_acf(config);
    if (command == "rip") return exec_rip(config);
    if (command == "cond") return exec_cond(config);
    if (command == "numtheory") return exec_numtheory(config);
    if (command == "identify") return exec_identify(config);
    throw std::domain_error("replay: unknown command '" + command + "' in manifest");
}

int exec_replay(const std::string& manifest_path, const std::string& out_override) {
    json manifest = load_json(manifest_path);
    json config = manifest.at("config");
    std::string original_out = config.at("out").get<std::string>();
    std::string new_out = out_override.empty() ? original_out + ".replay" : out_override;
    config["out"] = new_out;
    exec_by_name(manifest.at("command").get<std::string>(), config);

    bool all_match = true;
    for (const auto& rec : manifest.at("outputs")) {
        std::string path = rec.at("path").get<std::string>();
        if (path.rfind(original_out, 0) != 0) {
            std::cout << "skip " << path << " (outside output prefix)\n";
            continue;
        }
        std::string replayed = new_out + path.substr(original_out.size());
        std::string digest = sha256_file(replayed);
        bool match = digest == rec.at("sha256").get<std::string>();
        all_match = all_match && match;
        std::cout << (match ? "match    " : "MISMATCH ") << replayed << "\n";
    }
    if (!all_match) throw std::runtime_error("replay: outputs differ from the manifest");
    return 0;
}

} // namespace

// ---------------------------------------------------------------------------
// CLI wiring
// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"deterministic chirp probing sequences and Toeplitz RIP certification"};
    app.require_subcommand(1);

    // gen ------------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a probing sequence (CSV + binary)");
    std::string gen_kind = "hoc3", gen_alpha = "golden", gen_mode = "complex",
                gen_out = "sequence";
    std::uint64_t gen_length = 0;
    unsigned gen_degree = 15;
    std::string gen_taps, gen_lfsr_seed = "1";
    gen->add_option("--kind", gen_kind, "hoc3 | sine | prbs | constant");
    gen->add_option("--alpha", gen_alpha,
                    "preset (golden, sqrt2, sqrt3, golden-1, ...) or a/b/c/d");
    gen->add_option("--length", gen_length, "number of samples")->required();
    gen->add_option("--mode", gen_mode, "complex | real | imag");
    gen->add_option("--degree", gen_degree, "PRBS register degree (<= 20)");
    gen->add_option("--taps", gen_taps, "PRBS taps mask (bit i <=> x^i term)");
    gen->add_option("--lfsr-seed", gen_lfsr_seed, "PRBS nonzero start state");
    gen->add_option("--out", gen_out, "output prefix");
    gen->callback([&] {
        std::string spec = gen_kind;
        if (gen_kind == "hoc3" || gen_kind == "sine") spec += ":" + gen_alpha;
        if (gen_kind == "prbs") {
            spec += ":" + std::to_string(gen_degree);
            if (!gen_taps.empty()) spec += ":" + gen_taps + ":" + gen_lfsr_seed;
        }
        exec_gen(json{{"spec", spec},
                      {"length", gen_length},
                      {"mode", gen_mode},
                      {"out", gen_out}});
    });

    // acf ------------------------------------------------------------------
    auto* acf = app.add_subcommand("acf", "worst-case autocorrelation curves");
    std::vector<std::string> acf_specs;
    std::string acf_lengths = "64,128,256,512,1024,2048,4096", acf_mode = "complex",
                acf_out = "acf";
    std::size_t acf_workers = 1;
    acf->add_option("--spec", acf_specs, "sequence spec (repeatable), e.g. hoc3:golden")
        ->required();
    acf->add_option("--lengths", acf_lengths, "comma list of window lengths, ascending");
    acf->add_option("--mode", acf_mode, "complex | real | imag (chirp kinds)");
    acf->add_option("--workers", acf_workers, "worker threads per curve (results identical)");
    acf->add_option("--out", acf_out, "output prefix");
    acf->callback([&] {
        exec_acf(json{{"specs", acf_specs},
                      {"lengths", parse_size_list(acf_lengths)},
                      {"mode", acf_mode},
                      {"workers", acf_workers},
                      {"out", acf_out}});
    });

    // rip ------------------------------------------------------------------
    auto* rip = app.add_subcommand("rip", "certify RIP order and sample subsets");
    std::string rip_spec = "hoc3:golden", rip_kind = "fat", rip_mode = "real",
                rip_out = "rip";
    std::size_t rip_n = 0, rip_p = 0, rip_subsets = 32;
    std::uint64_t rip_seed = 1;
    rip->add_option("--spec", rip_spec, "sequence spec");
    rip->add_option("--kind", rip_kind, "lower | fat | steady");
    rip->add_option("--n", rip_n, "rows / window length")->required();
    rip->add_option("--p", rip_p, "columns (default n)");
    rip->add_option("--subsets", rip_subsets, "random subsets to eigen-check");
    rip->add_option("--seed", rip_seed, "subset sampling seed");
    rip->add_option("--mode", rip_mode, "complex | real | imag");
    rip->add_option("--out", rip_out, "output prefix");
    rip->callback([&] {
        exec_rip(json{{"spec", rip_spec},
                      {"kind", rip_kind},
                      {"n", rip_n},
                      {"p", rip_p == 0 ? rip_n : rip_p},
                      {"subsets", rip_subsets},
                      {"seed", rip_seed},
                      {"mode", rip_mode},
                      {"out", rip_out}});
    });

    // cond -----------------------------------------------------------------
    auto* cond = app.add_subcommand("cond", "condition-number Monte Carlo");
    std::string cond_config, cond_nvals = "50,100,200", cond_prule = "2n",
                cond_qrule = "n/5", cond_spec = "hoc3:golden", cond_mode = "real",
                cond_out = "cond";
    std::size_t cond_trials = 200, cond_workers = 1;
    std::uint64_t cond_seed = 1;
    cond->add_option("--config", cond_config, "key-value config file (overrides flags)");
    cond->add_option("--n-values", cond_nvals, "comma list of measurement counts");
    cond->add_option("--p-rule", cond_prule, "columns rule: <k>n, n/<k>, or constant");
    cond->add_option("--q-rule", cond_qrule, "sparsity rule");
    cond->add_option("--trials", cond_trials, "Monte Carlo trials per n");
    cond->add_option("--seed", cond_seed, "experiment seed");
    cond->add_option("--workers", cond_workers, "worker threads (results identical)");
    cond->add_option("--spec", cond_spec, "sequence spec");
    cond->add_option("--mode", cond_mode, "complex | real | imag");
    cond->add_option("--out", cond_out, "output prefix");
    cond->callback([&] {
        json cfg{{"n_values", parse_size_list(cond_nvals)},
                 {"p_rule", cond_prule},
                 {"q_rule", cond_qrule},
                 {"trials", cond_trials},
                 {"seed", cond_seed},
                 {"workers", cond_workers},
                 {"spec", cond_spec},
                 {"mode", cond_mode},
                 {"out", cond_out}};
        if (!cond_config.empty()) {
            auto kv = parse_key_value_file(cond_config);
            auto take = [&](const char* key, const char* dst) {
                auto it = kv.find(key);
                if (it != kv.end()) cfg[dst] = it->second;
            };
            if (kv.count("n_values")) cfg["n_values"] = parse_size_list(kv["n_values"]);
            take("p_rule", "p_rule");
            take("q_rule", "q_rule");
            if (kv.count("trials")) cfg["trials"] = std::stoull(kv["trials"]);
            if (kv.count("seed")) cfg["seed"] = std::stoull(kv["seed"]);
            if (kv.count("workers")) cfg["workers"] = std::stoull(kv["workers"]);
            take("spec", "spec");
            take("mode", "mode");
        }
        exec_cond(cfg);
    });

    // numtheory --------------------------------------------------------------
    auto* nt = app.add_subcommand("numtheory", "continued-fraction diagnostics");
    nt->require_subcommand(1);
    std::string nt_alpha = "golden", nt_beta = "golden-1", nt_out = "numtheory";
    std::string nt_m = "10", nt_n = "1000", nt_lambda = "1";
    std::string nt_tau_from = "1", nt_tau_to = "16";
    std::size_t nt_k = 10;

    auto* ntc = nt->add_subcommand("convergents", "convergent table A_k/B_k with D_k");
    ntc->add_option("--alpha", nt_alpha, "value to expand");
    ntc->add_option("--k", nt_k, "last convergent index");
    ntc->add_option("--out", nt_out, "output prefix");
    ntc->callback([&] {
        exec_numtheory(json{{"subcommand", "convergents"},
                            {"alpha", nt_alpha},
                            {"k", nt_k},
                            {"out", nt_out}});
    });

    auto* nto = nt->add_subcommand("ostrowski", "decompose m over the B_j");
    nto->add_option("--m", nt_m, "positive integer");
    nto->add_option("--beta", nt_beta, "irrational in (0,1)");
    nto->add_option("--out", nt_out, "output prefix");
    nto->callback([&] {
        exec_numtheory(json{{"subcommand", "ostrowski"},
                            {"m", nt_m},
                            {"beta", nt_beta},
                            {"out", nt_out}});
    });

    auto* ntt = nt->add_subcommand("types", "type histogram over 1..n");
    ntt->add_option("--n", nt_n, "range bound (<= 1e6)");
    ntt->add_option("--beta", nt_beta, "irrational in (0,1)");
    ntt->add_option("--out", nt_out, "output prefix");
    ntt->callback([&] {
        exec_numtheory(json{{"subcommand", "types"},
                            {"n", nt_n},
                            {"beta", nt_beta},
                            {"out", nt_out}});
    });

    auto* ntp = nt->add_subcommand("phi", "phi(tau) table");
    ntp->add_option("--alpha", nt_alpha, "chirp parameter");
    ntp->add_option("--n", nt_n, "window length");
    ntp->add_option("--lambda", nt_lambda, "rational >= 1, e.g. 1 or 3/2");
    ntp->add_option("--tau-from", nt_tau_from, "first tau");
    ntp->add_option("--tau-to", nt_tau_to, "last tau");
    ntp->add_option("--out", nt_out, "output prefix");
    ntp->callback([&] {
        exec_numtheory(json{{"subcommand", "phi"},
                            {"alpha", nt_alpha},
                            {"n", nt_n},
                            {"lambda", nt_lambda},
                            {"tau_from", nt_tau_from},
                            {"tau_to", nt_tau_to},
                            {"out", nt_out}});
    });

    auto* ntk = nt->add_subcommand("khinchin", "empirical min of j*||j*alpha||");
    ntk->add_option("--alpha", nt_alpha, "value to scan");
    ntk->add_option("--n", nt_n, "scan bound");
    ntk->add_option("--out", nt_out, "output prefix");
    ntk->callback([&] {
        exec_numtheory(json{{"subcommand", "khinchin"},
                            {"alpha", nt_alpha},
                            {"n", nt_n},
                            {"out", nt_out}});
    });

    // identify ---------------------------------------------------------------
    auto* idf = app.add_subcommand("identify", "sparse FIR recovery demo (OMP)");
    std::size_t idf_n = 200, idf_p = 400, idf_k = 5, idf_trials = 1;
    double idf_sigma = 0.0;
    std::uint64_t idf_seed = 1;
    std::string idf_spec = "hoc3:golden", idf_mode = "real", idf_out = "identify";
    idf->add_option("--n", idf_n, "measurements");
    idf->add_option("--p", idf_p, "FIR length (columns)");
    idf->add_option("--k", idf_k, "sparsity");
    idf->add_option("--sigma", idf_sigma, "noise standard deviation");
    idf->add_option("--trials", idf_trials, "seeded trials");
    idf->add_option("--seed", idf_seed, "experiment seed");
    idf->add_option("--spec", idf_spec, "sequence spec");
    idf->add_option("--mode", idf_mode, "complex | real | imag");
    idf->add_option("--out", idf_out, "output prefix");
    idf->callback([&] {
        exec_identify(json{{"n", idf_n},
                           {"p", idf_p},
                           {"k", idf_k},
                           {"sigma", idf_sigma},
                           {"trials", idf_trials},
                           {"seed", idf_seed},
                           {"spec", idf_spec},
                           {"mode", idf_mode},
                           {"out", idf_out}});
    });

    // replay -----------------------------------------------------------------
    auto* rep = app.add_subcommand("replay", "re-run a manifest and verify digests");
    std::string rep_manifest, rep_out;
    rep->add_option("manifest", rep_manifest, "path to a .manifest.json")->required();
    rep->add_option("--out", rep_out, "output prefix for the replayed run");
    rep->callback([&] { exec_replay(rep_manifest, rep_out); });

    std::vector<const char*> argv;
    argv.push_back("chirpsense");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const PrecisionError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const IllConditionedError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace chirpsense
