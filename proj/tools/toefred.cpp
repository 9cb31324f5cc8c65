// Command-line driver: symbol ingestion, subcommand dispatch, deterministic
// machine-readable reports (tsv or json). Exit code 0 iff every check passed.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <toefred/exact.hpp>
#include <toefred/fredholm.hpp>
#include <toefred/kernel.hpp>
#include <toefred/special_kernels.hpp>
#include <toefred/symbol.hpp>
#include <toefred/toeplitz.hpp>

using namespace toefred;
using ojson = nlohmann::ordered_json;

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ojson json_complex(cplx v) { return ojson{{"re", v.real()}, {"im", v.imag()}}; }

std::pair<int, int> parse_range(const std::string& s, const char* flag) {
    const auto bad = [&] {
        throw std::invalid_argument(std::string(flag) + ": expected an integer or a..b, got '" + s + "'");
    };
    const auto to_int = [&](const std::string& part) {
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(part, &pos);
        } catch (const std::exception&) {
            bad();
        }
        if (pos != part.size()) bad();
        return v;
    };
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        const int v = to_int(s);
        return {v, v};
    }
    const int a = to_int(s.substr(0, dots));
    const int b = to_int(s.substr(dots + 2));
    if (a > b) bad();
    return {a, b};
}

// The symbol selected on the command line, remembering which preset (if any)
// produced it so closed-form kernels can be offered.
struct SymbolChoice {
    SymbolSpec spec;
    std::string preset; // empty when the symbol came from a file
    double theta = 0, kappa = 0, xi = 0;
    cplx z{}, zprime{};
};

struct CommonArgs {
    std::string symbol_file, preset, out = "tsv", method = "all";
    double theta = 1.0, kappa = 1.0, z = 1.0, zprime = 1.0, xi = 0.5;
    double rel_tol = 1e-10;
    long seed = 0; // reserved
};

void add_symbol_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--symbol", a.symbol_file, "symbol spec file (json)");
    cmd->add_option("--preset", a.preset, "preset symbol: bessel|charlier|hypergeometric");
    cmd->add_option("--theta", a.theta, "preset parameter theta");
    cmd->add_option("--kappa", a.kappa, "preset parameter kappa");
    cmd->add_option("--z", a.z, "preset parameter z");
    cmd->add_option("--zprime", a.zprime, "preset parameter z'");
    cmd->add_option("--xi", a.xi, "preset parameter xi");
    cmd->add_option("--seed", a.seed, "reserved");
}

SymbolChoice resolve_symbol(const CommonArgs& a) {
    if (!a.preset.empty() && !a.symbol_file.empty())
        throw std::invalid_argument("--preset and --symbol are mutually exclusive");
    SymbolChoice sc;
    if (a.preset == "bessel") {
        sc.spec = preset_bessel(a.theta);
    } else if (a.preset == "charlier") {
        sc.spec = preset_charlier(a.kappa, a.theta);
    } else if (a.preset == "hypergeometric") {
        sc.spec = preset_hypergeometric(a.z, a.zprime, a.xi);
    } else if (!a.preset.empty()) {
        throw std::invalid_argument("unknown preset '" + a.preset + "'");
    } else if (!a.symbol_file.empty()) {
        std::ifstream in(a.symbol_file);
        if (!in) throw std::invalid_argument("cannot open symbol file '" + a.symbol_file + "'");
        nlohmann::json j;
        in >> j;
        sc.spec = symbol_from_json(j);
        return sc;
    } else {
        throw std::invalid_argument("one of --preset or --symbol is required");
    }
    sc.preset = a.preset;
    sc.theta = a.theta;
    sc.kappa = a.kappa;
    sc.xi = a.xi;
    sc.z = a.z;
    sc.zprime = a.zprime;
    return sc;
}

struct NamedSource {
    std::string name;
    KernelSource src;
};

// Sources in fixed order: series, quadrature, closed-form (when available).
std::vector<NamedSource> build_sources(const SymbolChoice& sc, const std::string& method,
                                       std::optional<IndexAdjudication>* adj_out) {
    const bool closed_available = !sc.preset.empty();
    bool series = false, quadrature = false, closed = false;
    if (method == "series") series = true;
    else if (method == "quadrature") quadrature = true;
    else if (method == "closed-form") closed = true;
    else if (method == "all") series = quadrature = true, closed = closed_available;
    else throw std::invalid_argument("--method must be series|quadrature|closed-form|all");
    if (closed && !closed_available)
        throw std::invalid_argument("closed-form kernels exist only for preset symbols");

    std::vector<NamedSource> out;
    if (series) out.push_back({"series", make_series_source(sc.spec)});
    if (quadrature) out.push_back({"quadrature", make_quadrature_source(sc.spec)});
    if (closed) {
        if (sc.preset == "bessel") {
            out.push_back({"closed-form", make_bessel_source(sc.theta)});
        } else if (sc.preset == "charlier") {
            out.push_back({"closed-form", make_charlier_source(sc.kappa, sc.theta)});
        } else {
            auto [src, adj] = make_hypergeom_source(sc.z, sc.zprime, sc.xi);
            out.push_back({"closed-form", src});
            if (adj_out) *adj_out = adj;
        }
    }
    return out;
}

std::string symbol_line(const SymbolSpec& s) { return symbol_to_json(s).dump(); }

ojson symbol_json(const SymbolSpec& s) { return ojson::parse(symbol_to_json(s).dump()); }

int emit(const std::string& text) {
    std::fputs(text.c_str(), stdout);
    return 0;
}

// ---------------------------------------------------------------- verify ---

int cmd_verify(const CommonArgs& a, const std::string& n_range) {
    const auto sc = resolve_symbol(a);
    if (!(a.rel_tol > 0)) throw std::invalid_argument("--rel-tol must be positive");
    const auto [n_lo, n_hi] = parse_range(n_range, "--n");
    if (n_lo < 0) throw std::invalid_argument("--n must be nonnegative");

    std::optional<IndexAdjudication> adj;
    const auto sources = build_sources(sc, a.method, &adj);
    const cplx z_const = szego_constant(sc.spec);
    const int w = std::max(n_hi - 1, 0);
    const auto phi = phi_coeffs(sc.spec, -w - 1, w + 1);

    struct Row {
        int n;
        std::string method;
        cplx lhs, rhs;
        double rel_err, tail;
        int M;
        bool converged, ok;
    };
    std::vector<Row> rows;
    bool all_ok = true;
    for (int n = n_lo; n <= n_hi; ++n) {
        const cplx lhs = toeplitz_det(phi, n).value;
        for (const auto& ns : sources) {
            const auto fr = det_truncated(ns.src, n, a.rel_tol);
            const cplx rhs = z_const * fr.value;
            const double denom = std::max(std::abs(lhs), 1e-300);
            const double rel = std::abs(lhs - rhs) / denom;
            const bool ok = fr.converged && rel <= a.rel_tol;
            all_ok = all_ok && ok;
            rows.push_back({n, ns.name, lhs, rhs, rel, fr.tail_bound, fr.M, fr.converged, ok});
        }
    }

    std::string text;
    if (a.out == "json") {
        ojson rep;
        rep["schema_version"] = 1;
        rep["command"] = "verify";
        rep["symbol"] = symbol_json(sc.spec);
        rep["rel_tol"] = a.rel_tol;
        rep["z"] = json_complex(z_const);
        rep["rows"] = ojson::array();
        for (const auto& r : rows)
            rep["rows"].push_back(ojson{{"n", r.n},
                                        {"method", r.method},
                                        {"lhs", json_complex(r.lhs)},
                                        {"rhs", json_complex(r.rhs)},
                                        {"rel_err", r.rel_err},
                                        {"M", r.M},
                                        {"tail_bound", r.tail},
                                        {"converged", r.converged},
                                        {"status", r.ok ? "ok" : "FAIL"}});
        rep["status"] = all_ok ? "pass" : "fail";
        text = rep.dump(2) + "\n";
    } else {
        text += "# toefred verify\n";
        text += "# symbol\t" + symbol_line(sc.spec) + "\n";
        text += "# rel_tol\t" + fmt17(a.rel_tol) + "\n";
        text += "# Z\t" + fmt17(z_const.real()) + "\t" + fmt17(z_const.imag()) + "\n";
        text += "n\tmethod\tlhs_re\tlhs_im\trhs_re\trhs_im\trel_err\tM\ttail_bound\tstatus\n";
        for (const auto& r : rows) {
            text += std::to_string(r.n) + "\t" + r.method + "\t" + fmt17(r.lhs.real()) + "\t" +
                    fmt17(r.lhs.imag()) + "\t" + fmt17(r.rhs.real()) + "\t" +
                    fmt17(r.rhs.imag()) + "\t" + fmt17(r.rel_err) + "\t" + std::to_string(r.M) +
                    "\t" + fmt17(r.tail) + "\t" + (r.ok ? "ok" : "FAIL") + "\n";
        }
        text += std::string("# overall\t") + (all_ok ? "pass" : "fail") + "\n";
    }
    emit(text);
    return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------- szego ----

int cmd_szego(const CommonArgs& a, const std::string& n_range) {
    const auto sc = resolve_symbol(a);
    const auto [n_lo, n_hi] = parse_range(n_range, "--n");
    if (n_lo < 0) throw std::invalid_argument("--n must be nonnegative");
    const cplx z_const = szego_constant(sc.spec);
    const int w = std::max(n_hi - 1, 0);
    const auto phi = phi_coeffs(sc.spec, -w - 1, w + 1);

    std::string text;
    std::vector<std::array<std::string, 5>> rows;
    double prev_gap = -1.0;
    for (int n = n_lo; n <= n_hi; ++n) {
        const cplx dn = toeplitz_det(phi, n).value;
        const double gap = std::abs(dn - z_const);
        std::string ratio = "-";
        if (prev_gap > 0.0) ratio = fmt17(gap / prev_gap);
        rows.push_back({std::to_string(n), fmt17(dn.real()), fmt17(dn.imag()), fmt17(gap), ratio});
        prev_gap = gap;
    }

    if (a.out == "json") {
        ojson rep;
        rep["schema_version"] = 1;
        rep["command"] = "szego";
        rep["symbol"] = symbol_json(sc.spec);
        rep["z"] = json_complex(z_const);
        rep["rows"] = ojson::array();
        for (const auto& r : rows)
            rep["rows"].push_back(ojson{{"n", std::stoi(r[0])},
                                        {"dn", ojson{{"re", std::stod(r[1])}, {"im", std::stod(r[2])}}},
                                        {"gap", std::stod(r[3])},
                                        {"gap_ratio", r[4] == "-" ? ojson(nullptr) : ojson(std::stod(r[4]))}});
        text = rep.dump(2) + "\n";
    } else {
        text += "# toefred szego\n";
        text += "# symbol\t" + symbol_line(sc.spec) + "\n";
        text += "# Z\t" + fmt17(z_const.real()) + "\t" + fmt17(z_const.imag()) + "\n";
        text += "n\tdn_re\tdn_im\tgap\tgap_ratio\n";
        for (const auto& r : rows)
            text += r[0] + "\t" + r[1] + "\t" + r[2] + "\t" + r[3] + "\t" + r[4] + "\n";
    }
    emit(text);
    return 0;
}

// ---------------------------------------------------------------- kernel ---

int cmd_kernel(const CommonArgs& a, const std::string& i_range, const std::string& j_range) {
    const auto sc = resolve_symbol(a);
    const auto [i_lo, i_hi] = parse_range(i_range, "--i");
    const auto [j_lo, j_hi] = parse_range(j_range, "--j");
    if (i_lo < 0 || j_lo < 0) throw std::invalid_argument("kernel indices must be nonnegative");

    std::optional<IndexAdjudication> adj;
    const auto sources = build_sources(sc, a.method, &adj);

    const std::size_t ns = sources.size();
    std::vector<std::vector<cplx>> values(ns);
    for (std::size_t s = 0; s < ns; ++s)
        for (int i = i_lo; i <= i_hi; ++i)
            for (int j = j_lo; j <= j_hi; ++j) values[s].push_back(sources[s].src.eval(i, j));

    // pairwise max absolute deviations in fixed order
    std::vector<std::array<std::string, 2>> deviations;
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t t = s + 1; t < ns; ++t) {
            double dev = 0;
            for (std::size_t e = 0; e < values[s].size(); ++e)
                dev = std::max(dev, std::abs(values[s][e] - values[t][e]));
            deviations.push_back({sources[s].name + "~" + sources[t].name, fmt17(dev)});
        }

    std::string text;
    if (a.out == "json") {
        ojson rep;
        rep["schema_version"] = 1;
        rep["command"] = "kernel";
        rep["symbol"] = symbol_json(sc.spec);
        rep["rows"] = ojson::array();
        std::size_t e = 0;
        for (int i = i_lo; i <= i_hi; ++i)
            for (int j = j_lo; j <= j_hi; ++j, ++e) {
                ojson row{{"i", i}, {"j", j}};
                for (std::size_t s = 0; s < ns; ++s) row[sources[s].name] = json_complex(values[s][e]);
                rep["rows"].push_back(row);
            }
        rep["max_deviation"] = ojson::object();
        for (const auto& d : deviations) rep["max_deviation"][d[0]] = std::stod(d[1]);
        if (adj) {
            rep["adjudication"] =
                ojson{{"denominator", adj->chosen == IndexReading::denom_i_plus_1 ? "i+1" : "i+2"},
                      {"err_chosen", adj->err_chosen},
                      {"err_rejected", adj->err_rejected}};
        }
        text = rep.dump(2) + "\n";
    } else {
        text += "# toefred kernel\n";
        text += "# symbol\t" + symbol_line(sc.spec) + "\n";
        text += "i\tj";
        for (const auto& s : sources) text += "\t" + s.name + "_re\t" + s.name + "_im";
        text += "\n";
        std::size_t e = 0;
        for (int i = i_lo; i <= i_hi; ++i)
            for (int j = j_lo; j <= j_hi; ++j, ++e) {
                text += std::to_string(i) + "\t" + std::to_string(j);
                for (std::size_t s = 0; s < ns; ++s)
                    text += "\t" + fmt17(values[s][e].real()) + "\t" + fmt17(values[s][e].imag());
                text += "\n";
            }
        for (const auto& d : deviations) text += "# max_deviation\t" + d[0] + "\t" + d[1] + "\n";
        if (adj)
            text += std::string("# adjudication\tdenominator=") +
                    (adj->chosen == IndexReading::denom_i_plus_1 ? "i+1" : "i+2") +
                    "\terr_chosen=" + fmt17(adj->err_chosen) +
                    "\terr_rejected=" + fmt17(adj->err_rejected) + "\n";
    }
    emit(text);
    return 0;
}

// ---------------------------------------------------------------- exact ----

struct ExactRow {
    std::string check, params;
    ojson params_json;
    GradedPoly diff;
};

int cmd_exact(const CommonArgs& a, const std::string& n_range, int degree) {
    if (degree < 0 || degree > 12)
        throw std::invalid_argument("--degree must be between 0 and 12");
    const auto [n_lo, n_hi] = parse_range(n_range, "--n");
    if (n_lo < 0) throw std::invalid_argument("--n must be nonnegative");

    std::vector<ExactRow> rows;
    for (int n = n_lo; n <= n_hi; ++n) {
        const std::string np = "n=" + std::to_string(n) + " d=" + std::to_string(degree);
        const ojson npj{{"n", n}, {"d", degree}};
        rows.push_back({"identity", np, npj, exact_verify(n, degree)});
        rows.push_back({"schur_sum", np, npj, gessel_check(n, degree)});
        rows.push_back({"ray_vacancy", np, npj, ray_vacancy_check(n, degree)});
    }
    const std::vector<std::vector<int>> xsets = {{}, {0}, {-1, 1}};
    for (const auto& xs : xsets) {
        std::string sx = "X={";
        ojson xj = ojson::array();
        for (std::size_t k = 0; k < xs.size(); ++k) {
            sx += (k ? "," : "") + std::to_string(xs[k]);
            xj.push_back(xs[k]);
        }
        sx += "} d=" + std::to_string(degree);
        rows.push_back({"correlation", sx, ojson{{"X", xj}, {"d", degree}},
                        correlation_check(xs, degree)});
    }

    bool all_ok = true;
    for (const auto& r : rows) all_ok = all_ok && gp_is_zero(r.diff);

    std::string text;
    if (a.out == "json") {
        ojson rep;
        rep["schema_version"] = 1;
        rep["command"] = "exact";
        rep["degree"] = degree;
        rep["checks"] = ojson::array();
        for (const auto& r : rows) {
            ojson terms_json = ojson::array();
            for (const auto& [m, c] : r.diff.terms)
                terms_json.push_back(ojson{{"monomial", mono_str(m)}, {"coefficient", rational_str(c)}});
            rep["checks"].push_back(ojson{{"check", r.check},
                                          {"params", r.params_json},
                                          {"status", gp_is_zero(r.diff) ? "pass" : "fail"},
                                          {"difference_terms", terms_json}});
        }
        rep["status"] = all_ok ? "pass" : "fail";
        text = rep.dump(2) + "\n";
    } else {
        text += "# toefred exact\n";
        text += "check\tparams\tstatus\tdifference\n";
        for (const auto& r : rows)
            text += r.check + "\t" + r.params + "\t" + (gp_is_zero(r.diff) ? "pass" : "fail") +
                    "\t" + gp_str(r.diff) + "\n";
        text += std::string("# overall\t") + (all_ok ? "pass" : "fail") + "\n";
    }
    emit(text);
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toeplitz determinants as Fredholm determinants: compute both sides, check the identity"};
    app.require_subcommand(1);

    CommonArgs va, sa, ka, ea;
    std::string v_n = "1..6", s_n = "1..12", k_i = "0..5", k_j = "0..5", e_n = "1..3";
    int degree = 6;

    auto* verify = app.add_subcommand("verify", "check D_n = Z*det(1-K) for a range of n");
    add_symbol_flags(verify, va);
    verify->add_option("--n", v_n, "order range a..b");
    verify->add_option("--method", va.method, "series|quadrature|closed-form|all");
    verify->add_option("--rel-tol", va.rel_tol, "relative tolerance");
    verify->add_option("--out", va.out, "tsv|json");

    auto* szego = app.add_subcommand("szego", "table of D_n against the limiting constant");
    add_symbol_flags(szego, sa);
    szego->add_option("--n", s_n, "order range a..b");
    szego->add_option("--out", sa.out, "tsv|json");

    auto* kernel = app.add_subcommand("kernel", "kernel entries by each method, with deviations");
    add_symbol_flags(kernel, ka);
    kernel->add_option("--i", k_i, "row index range a..b");
    kernel->add_option("--j", k_j, "column index range a..b");
    kernel->add_option("--method", ka.method, "series|quadrature|closed-form|all");
    kernel->add_option("--out", ka.out, "tsv|json");

    auto* exact = app.add_subcommand("exact", "exact identity checks in the truncated algebra");
    exact->add_option("--n", e_n, "order range a..b");
    exact->add_option("--degree", degree, "truncation degree (0..12)");
    exact->add_option("--out", ea.out, "tsv|json");
    exact->add_option("--seed", ea.seed, "reserved");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(verify)) return cmd_verify(va, v_n);
        if (app.got_subcommand(szego)) return cmd_szego(sa, s_n);
        if (app.got_subcommand(kernel)) return cmd_kernel(ka, k_i, k_j);
        if (app.got_subcommand(exact)) return cmd_exact(ea, e_n, degree);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
