// rittkit: command-line front end for the spectral toolkit.
//
// Exit codes: 0 success, 2 validation error, 3 dimension guard exceeded,
// 4 numerical failure.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "rittkit/corpus.hpp"
#include "rittkit/report.hpp"

namespace fs = std::filesystem;
using namespace rittkit;

namespace {

struct Options {
    std::string config_path;
    fs::path out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;
};

json load_config(const Options& opt) {
    std::ifstream in(opt.config_path);
    if (!in) throw config_error("cannot read config file: " + opt.config_path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    return cfg;
}

std::uint64_t pick_seed(const Options& opt, const json& cfg, bool required) {
    if (opt.seed_given) return opt.seed;
    if (cfg.contains("seed")) return cfg["seed"].get<std::uint64_t>();
    if (required) throw config_error("randomized commands need a seed (config key 'seed' or --seed)");
    return 0;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 step keeps per-trial streams independent of thread count
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

unsigned pool_size() {
    if (const char* env = std::getenv("RITTKIT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// index-deterministic parallel for; results must be written per index
template <typename F>
void parallel_for(std::size_t count, F&& body) {
    const unsigned threads = std::min<std::size_t>(pool_size(), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mutex;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::scoped_lock lock(err_mutex);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

void emit(const Options& opt, const std::string& name, const json& report) {
    fs::create_directories(opt.out_dir);
    write_atomic(opt.out_dir / name, report.dump(2) + "\n");
}

void emit_csv(const Options& opt, const std::string& name, const std::string& header,
              const std::vector<std::vector<double>>& rows) {
    std::string out = header + "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += fmt(row[i]);
        }
        out += '\n';
    }
    fs::create_directories(opt.out_dir);
    write_atomic(opt.out_dir / name, out);
}

NormTag tag_from_json(const json& j, std::int64_t outer_dim) {
    const auto exponent = [](const json& v) {
        if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity"))
            return inf;
        return v.get<double>();
    };
    NormTag tag = lp_tag(2.0, outer_dim);
    if (j.contains("p")) tag.p = exponent(j["p"]);
    tag.q = j.contains("q") ? exponent(j["q"]) : tag.p;
    if (j.contains("m")) tag.m = j["m"].get<std::int64_t>();
    if (tag.p < 1.0 || tag.q < 1.0) throw config_error("exponents must lie in [1, inf]");
    return tag;
}

// ---------------------------------------------------------------------------

int cmd_analyze_measure(const Options& opt) {
    const json cfg = load_config(opt);
    if (!cfg.contains("measure")) throw config_error("analyze-measure: missing 'measure'");
    const Measure mu = as_probability(measure_from_json(cfg["measure"]));
    const std::int64_t nmax = cfg.value("nmax", std::int64_t{64});
    const std::int64_t grid_m = cfg.value("grid_m", std::int64_t{0});
    if (nmax < 1) throw config_error("nmax must be >= 1");

    const Symbol sym = fourier_symbol(mu, grid_m);
    const BarReport bar = bar_constant(sym);
    const auto gamma_star = minimal_stolz_angle(sym);

    json report{{"command", "analyze-measure"},
                {"version", kVersion},
                {"config", cfg},
                {"measure", to_json(mu)},
                {"symbol", to_json(sym)},
                {"bar", to_json(bar)},
                {"gamma_star", gamma_star ? json(*gamma_star) : json("fail")}};

    std::vector<std::vector<double>> locus;
    for (cdouble v : sym.values) locus.push_back({v.real(), v.imag()});
    emit_csv(opt, "symbol_locus.csv", "re,im", locus);

    if (gamma_star && *gamma_star > 0.0) {
        std::vector<std::vector<double>> boundary;
        for (cdouble z : stolz_boundary(*gamma_star)) boundary.push_back({z.real(), z.imag()});
        emit_csv(opt, "stolz_boundary.csv", "re,im", boundary);
    } else {
        report["stolz_boundary"] =
            gamma_star ? "degenerate (symbol on the segment [0,1])" : "none (fail-flag)";
    }

    if (mu.group) {
        const LinearOperator conv =
            convolution_operator(mu, *mu.group, lp_tag(2.0, mu.group->order()));
        RittReport ritt = ritt_constants(conv, nmax);
        ritt.resolvent_k = resolvent_constant(conv, 24, 128);
        report["ritt"] = to_json(ritt);

        std::vector<std::vector<double>> profile;
        Matrix prev = identity(conv.dim());
        for (std::int64_t n = 1; n <= std::min<std::int64_t>(nmax, 64); ++n) {
            const Matrix cur = prev * conv.mat;
            profile.push_back({static_cast<double>(n),
                               static_cast<double>(n) * operator_norm(cur - prev, conv.space).value});
            prev = cur;
        }
        emit_csv(opt, "ritt_profile.csv", "n,value", profile);

        std::vector<double> gammas = cfg.value("gammas", std::vector<double>{});
        if (gammas.empty() && gamma_star && *gamma_star < std::numbers::pi / 2.0 - 0.05) {
            const double base = std::max(*gamma_star, 0.05);
            for (double f : {1.1, 1.5, 2.0})
                if (base * f < std::numbers::pi / 2.0) gammas.push_back(base * f);
        }
        const std::uint64_t seed = pick_seed(opt, cfg, false);
        json calc = json::array();
        for (double gamma : gammas) calc.push_back(to_json(hinf_ratio(conv, gamma, {}, seed)));
        report["calculus"] = std::move(calc);
    }
    emit(opt, "report.json", report);
    return 0;
}

int cmd_analyze_operator(const Options& opt) {
    const json cfg = load_config(opt);
    if (!cfg.contains("matrix")) throw config_error("analyze-operator: missing 'matrix'");
    const auto rows = cfg["matrix"];
    const std::int64_t d = static_cast<std::int64_t>(rows.size());
    Matrix a(d, d);
    for (std::int64_t i = 0; i < d; ++i) {
        if (static_cast<std::int64_t>(rows[i].size()) != d)
            throw config_error("matrix must be square");
        for (std::int64_t j = 0; j < d; ++j) {
            const auto& e = rows[i][j];
            a(i, j) = e.is_array() ? cdouble(e[0].get<double>(), e[1].get<double>())
                                   : cdouble(e.get<double>(), 0.0);
        }
    }
    NormTag tag = tag_from_json(cfg.value("space", json::object()), d);
    if (tag.dim() != d) {
        if (d % tag.m != 0) throw config_error("matrix dimension is not a multiple of m");
        tag.legs = {d / tag.m};
    }
    const LinearOperator t(a, tag);
    const std::int64_t nmax = cfg.value("nmax", std::int64_t{64});
    RittReport ritt = ritt_constants(t, nmax);
    json report{{"command", "analyze-operator"}, {"version", kVersion}, {"config", cfg}};
    double rad = 0.0;
    for (cdouble l : spectrum(t)) rad = std::max(rad, std::abs(l));
    if (rad <= 1.0 + 1e-9) ritt.resolvent_k = resolvent_constant(t, 24, 128);
    report["ritt"] = to_json(ritt);

    const LinearOperator gen(Matrix(identity(d) - a), tag);
    double alpha_min = 0.0;
    for (cdouble l : spectrum(gen))
        if (std::abs(l) > 1e-12) alpha_min = std::max(alpha_min, std::abs(std::arg(l)));
    report["sector_threshold"] = alpha_min;
    const double alpha = cfg.value("alpha", std::min(alpha_min * 1.05 + 1e-6,
                                                     std::numbers::pi - 1e-6));
    report["sectorial"] = json{{"alpha", alpha},
                               {"k_alpha", sectorial_constant(gen, alpha, 32, 64)},
                               {"certificate", to_string(Certificate::mesh_lower_bound)}};
    emit(opt, "report.json", report);
    return 0;
}

int cmd_transference(const Options& opt) {
    const json cfg = load_config(opt);
    const FiniteAbelianGroup g(cfg.value("group", std::vector<std::int64_t>{8}));
    const double p = cfg.value("p", 2.0);
    const std::int64_t trials = cfg.value("trials", std::int64_t{100});
    const std::int64_t dim = cfg.value("dim", std::int64_t{4});
    const double q = cfg.value("q", 2.0);
    const std::uint64_t seed = pick_seed(opt, cfg, true);
    if (g.rank() != 1) throw config_error("transference trials use a single cyclic factor");

    std::vector<json> lines(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
        const std::uint64_t s = derive_seed(seed, t);
        std::mt19937_64 rng(s);
        auto [v, d] = random_conjugated_unitary(dim, rng, g.factors[0]);
        const Matrix u = v * d.asDiagonal() * v.partialPivLu().inverse();
        const Representation pi = finite_representation(g, {u}, lp_tag(q, dim));
        const Measure nu = random_probability(g, rng);
        const TransferenceRecord rec = transference_check(pi, nu, p);
        json line = to_json(rec);
        line["seed"] = s;
        line["group"] = g.factors;
        line["p"] = p;
        lines[t] = std::move(line);
    });

    std::string jsonl;
    bool all_hold = true;
    double worst_slack = -inf;
    for (const auto& line : lines) {
        jsonl += line.dump() + "\n";
        all_hold = all_hold && line["holds"].get<bool>();
        worst_slack = std::max(worst_slack,
                               line["lhs"].get<double>() - line["rhs"].get<double>());
    }
    fs::create_directories(opt.out_dir);
    write_atomic(opt.out_dir / "trials.jsonl", jsonl);
    emit(opt, "report.json",
         json{{"command", "transference"},
              {"version", kVersion},
              {"config", cfg},
              {"trials", trials},
              {"all_hold", all_hold},
              {"worst_slack", worst_slack}});
    return 0;
}

int cmd_tensor_chain(const Options& opt) {
    const json cfg = load_config(opt);
    const FiniteAbelianGroup g(cfg.value("group", std::vector<std::int64_t>{2}));
    if (!cfg.contains("eta")) throw config_error("tensor-chain: missing 'eta'");
    const Measure eta = as_probability(measure_from_json(cfg["eta"]));
    const double p = cfg.value("p", 2.0);
    const double q = cfg.value("q", 2.0);
    const std::int64_t m = cfg.value("m", std::int64_t{1});
    const std::int64_t nmax = cfg.value("nmax", std::int64_t{2});

    const auto rows = subordination_chain_check(eta, g, p, q, m, nmax);
    json table = json::array();
    std::vector<std::vector<double>> csv;
    for (const auto& row : rows) {
        table.push_back(to_json(row));
        csv.push_back({static_cast<double>(row.n), row.lhs, row.rhs});
    }
    emit_csv(opt, "chain.csv", "n,lhs,rhs", csv);
    emit(opt, "report.json",
         json{{"command", "tensor-chain"},
              {"version", kVersion},
              {"config", cfg},
              {"rows", std::move(table)}});
    return 0;
}

int cmd_dilation(const Options& opt) {
    const json cfg = load_config(opt);
    json results = json::array();
    if (cfg.contains("P")) {
        const auto rows = cfg["P"];
        const std::int64_t k = static_cast<std::int64_t>(rows.size());
        Eigen::MatrixXd p(k, k);
        for (std::int64_t i = 0; i < k; ++i)
            for (std::int64_t j = 0; j < k; ++j) p(i, j) = rows[i][j].get<double>();
        const auto pi = cfg.value("pi", std::vector<double>{});
        if (static_cast<std::int64_t>(pi.size()) != k)
            throw config_error("dilation: 'pi' must match the chain size");
        const DilationTriple d = rota_dilation(p, pi);
        results.push_back(to_json(validate_dilation(d, p)));
    } else {
        const std::int64_t chains = cfg.value("chains", std::int64_t{100});
        const std::int64_t size = cfg.value("size", std::int64_t{8});
        const std::uint64_t seed = pick_seed(opt, cfg, true);
        std::vector<json> out(static_cast<std::size_t>(chains));
        parallel_for(static_cast<std::size_t>(chains), [&](std::size_t c) {
            std::mt19937_64 rng(derive_seed(seed, c));
            auto [p, pi] = random_reversible_chain(size, rng);
            const DilationTriple d = rota_dilation(p, pi);
            json rec = to_json(validate_dilation(d, p));
            rec["seed"] = derive_seed(seed, c);
            out[c] = std::move(rec);
        });
        for (auto& rec : out) results.push_back(std::move(rec));
    }
    emit(opt, "report.json", json{{"command", "dilation"},
                                  {"version", kVersion},
                                  {"config", cfg},
                                  {"results", std::move(results)}});
    return 0;
}

int cmd_sweep(const Options& opt) {
    const json cfg = load_config(opt);
    const std::string kind = cfg.value("kind", "");
    const std::uint64_t seed = pick_seed(opt, cfg, true);
    std::vector<std::vector<double>> csv;
    std::string header;
    json certificates = json::array();
    if (kind == "kconvexity") {
        const double q = cfg.value("q", 1.0);
        const auto ms = cfg.value("m_values", std::vector<std::int64_t>{1, 2, 4});
        const std::int64_t nvars = cfg.value("rademacher", std::int64_t{6});
        header = "m,rademacher_vars,value,seed";
        for (std::int64_t m : ms) {
            const auto est = kconvexity_lower(q, m, nvars);
            csv.push_back({static_cast<double>(m), static_cast<double>(nvars), est.value,
                           static_cast<double>(seed)});
            certificates.push_back(to_string(est.certificate));
        }
    } else if (kind == "regular-norm") {
        if (!cfg.contains("measure")) throw config_error("regular-norm sweep needs 'measure'");
        const Measure mu = measure_from_json(cfg["measure"]);
        if (!mu.group) throw config_error("regular-norm sweep needs a finite-group measure");
        const double p = cfg.value("p", 2.0);
        const double scale = cfg.value("scale", 1.0);
        const double shift = cfg.value("shift", 0.0);
        const std::int64_t nmax = cfg.value("nmax", std::int64_t{8});
        Matrix a = scale * convolution_operator(mu, *mu.group, lp_tag(p, mu.group->order())).mat;
        a.diagonal().array() += shift;
        const LinearOperator t(a, lp_tag(p, mu.group->order()));
        const auto vals = regular_norm_lower(t, nmax);
        header = "n,value,seed";
        for (std::size_t i = 0; i < vals.size(); ++i) {
            csv.push_back({static_cast<double>(i + 1), vals[i], static_cast<double>(seed)});
            certificates.push_back(to_string(Certificate::mesh_lower_bound));
        }
    } else if (kind == "phi-n") {
        const double gamma = cfg.value("gamma", std::numbers::pi / 4.0);
        const std::int64_t nmax = cfg.value("nmax", std::int64_t{10000});
        const double cgamma = stolz_ratio_constant(gamma);
        header = "n,value,bound";
        for (std::int64_t n = 1; n <= nmax; n = std::max(n + 1, n * 5 / 4)) {
            const double bound =
                cgamma * std::pow(1.0 - 1.0 / static_cast<double>(n),
                                  static_cast<double>(n - 1));
            csv.push_back({static_cast<double>(n), phi_n_sup(n, gamma), bound});
        }
    } else {
        throw config_error("sweep kind must be kconvexity, regular-norm, or phi-n");
    }
    emit_csv(opt, "sweep.csv", header, csv);
    json report{{"command", "sweep"}, {"version", kVersion}, {"config", cfg}, {"rows", csv.size()}};
    if (!certificates.empty()) report["certificates"] = std::move(certificates);
    emit(opt, "report.json", report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rittkit: subordinated-operator spectral toolkit"};
    app.require_subcommand(1);

    Options opt;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "JSON config file")->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "master seed (overrides the config)")
            ->each([&](const std::string&) { opt.seed_given = true; });
    };

    std::map<std::string, int (*)(const Options&)> handlers{
        {"analyze-measure", cmd_analyze_measure}, {"analyze-operator", cmd_analyze_operator},
        {"transference", cmd_transference},       {"tensor-chain", cmd_tensor_chain},
        {"dilation", cmd_dilation},               {"sweep", cmd_sweep}};
    for (auto& [name, fn] : handlers) add_common(app.add_subcommand(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const auto started = std::chrono::steady_clock::now();
    try {
        for (auto& [name, fn] : handlers)
            if (app.get_subcommand(name)->parsed()) {
                const int rc = fn(opt);
                const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                    std::chrono::steady_clock::now() - started)
                                    .count();
                std::cerr << name << ": done in " << ms << " ms\n";
                return rc;
            }
        return 2;
    } catch (const guard_error& e) {
        std::cerr << "guard exceeded: " << e.what() << "\n";
        return 3;
    } catch (const config_error& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const structural_error& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const precondition_error& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    }
}
