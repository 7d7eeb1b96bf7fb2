// gorms: command-line front end.
// Exit codes: 0 success, 1 verification failure, 2 usage or config error.

#include "io.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

using namespace gorms;
using io::ConfigError;
using io::Json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Output {
    std::string format;
    void add_flag(CLI::App* sub, const std::string& def) {
        format = def;
        sub->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    }
    [[nodiscard]] bool json() const { return format == "json"; }
};

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<Coef> coef_list(const std::string& text, const std::vector<std::string>& coords, const std::string& field) {
    std::vector<Coef> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(parse_coef(item, coords));
        } catch (const std::exception& e) {
            throw ConfigError(field, e.what());
        }
    }
    return out;
}

Elem parse_field(const Context& ctx, const std::string& text, const std::string& field) {
    try {
        return parse_elem(ctx, text);
    } catch (const std::exception& e) {
        throw ConfigError(field, e.what());
    }
}

// check ---------------------------------------------------------------------

struct CheckArgs {
    std::vector<std::string> suites;
    bool keep_going = false;
    unsigned workers = 0;
    Output out;
};

int run_check(const CheckArgs& a) {
    const std::vector<std::string> names = a.suites.empty() ? verify::suite_names() : a.suites;
    Json report = Json::array();
    bool ok = true;
    for (const auto& name : names) {
        const verify::SuiteResult s = verify::run_suite(name, a.workers);
        verify::SuiteResult shown{s.name, {}};
        for (const auto& c : s.checks) {
            shown.checks.push_back(c);
            if (!c.ok) {
                ok = false;
                if (!a.keep_going) break;
            }
        }
        if (a.out.json()) report.push_back(io::to_json(shown));
        else
            for (const auto& c : shown.checks)
                std::cout << (c.ok ? "PASS " : "FAIL ") << s.name << ": " << c.label << (c.detail.empty() ? "" : "  [" + c.detail + "]") << "\n";
        if (!ok && !a.keep_going) break;
    }
    if (a.out.json()) emit(Json{{"ok", ok}, {"suites", report}});
    else std::cout << (ok ? "all checks passed" : "verification failed") << "\n";
    return ok ? kOk : kFailed;
}

// transform -----------------------------------------------------------------

struct TransformArgs {
    int n = 2;
    int m = 1;
    std::string expr;
    std::string op;
    std::string field;  // comma-separated coefficient list for lie, iota, pullback
    std::vector<std::string> matrix;
    Output out;
};

int run_transform(const TransformArgs& a) {
    if (a.m < 1) throw ConfigError("--m", "must be positive");
    if (a.n < 1 || a.n > 6) throw ConfigError("--n", "must be between 1 and 6");
    const Context ctx = make_context(a.n, a.m);
    const Elem e = parse_field(ctx, a.expr, "--expr");
    auto direction = [&](char c) {
        const int k = c - '0';
        if (k < 1 || k > a.n) throw ConfigError("--op", "direction out of range for n = " + std::to_string(a.n));
        return k;
    };
    Elem result(ctx);
    const std::string& op = a.op;
    if (op.size() == 2 && op[0] == 'd') result = d_op(ctx, direction(op[1])).apply(e);
    else if (op.size() == 2 && op[0] == 'r') result = r_op(ctx, direction(op[1])).apply(e);
    else if (op.size() == 3 && op[0] == 'e') result = euler_op(ctx, direction(op[1]), direction(op[2])).apply(e);
    else if (op == "lie" || op == "iota" || op == "pullback") {
        const auto v = coef_list(a.field, ctx.coord_names(), "--field");
        if (v.size() != static_cast<std::size_t>(a.m)) throw ConfigError("--field", "expected " + std::to_string(a.m) + " components");
        if (op == "lie") result = lie_op(ctx, v).apply(e);
        else if (op == "iota") result = iota_op(ctx, v).apply(e);
        else result = pullback(ctx, v).apply(e);
    } else if (op == "mat2") {
        if (a.matrix.size() != 4) throw ConfigError("--matrix", "expected four rational entries a,b,c,d");
        Mat2 mat;
        for (std::size_t k = 0; k < 4; ++k) {
            try {
                mat[k / 2][k % 2] = Rational(a.matrix[k]);
                mat[k / 2][k % 2].canonicalize();
            } catch (const std::exception&) {
                throw ConfigError("--matrix[" + std::to_string(k) + "]", "not a rational number");
            }
        }
        result = mat2_act(ctx, mat).apply(e);
    } else {
        throw ConfigError("--op", "unknown operation '" + op + "' (d<a>, r<a>, e<ab>, lie, iota, pullback, mat2)");
    }
    const std::string text = result.is_zero() ? "0" : result.to_string();
    if (a.out.json()) emit(Json{{"n", a.n}, {"m", a.m}, {"op", op}, {"input", e.is_zero() ? "0" : e.to_string()}, {"result", text}});
    else std::cout << text << "\n";
    return kOk;
}

// integrate -----------------------------------------------------------------

struct IntegrateArgs {
    int m = 1;
    std::string exponent;
    std::string integrand = "1";
    std::string domain;
    std::string config;
    std::size_t nodes = 400;
    unsigned workers = 0;
    Output out;
};

int run_integrate(IntegrateArgs a) {
    nlohmann::json dom_json;
    if (!a.config.empty()) {
        const nlohmann::json j = io::read_json_file(a.config);
        if (!j.is_object()) throw ConfigError("config", "expected an object");
        if (j.contains("m")) {
            if (!j["m"].is_number_integer()) throw ConfigError("m", "expected an integer");
            a.m = j["m"].get<int>();
        }
        if (!j.contains("exponent") || !j["exponent"].is_string()) throw ConfigError("exponent", "expected a string");
        a.exponent = j["exponent"].get<std::string>();
        if (j.contains("integrand")) {
            if (!j["integrand"].is_string()) throw ConfigError("integrand", "expected a string");
            a.integrand = j["integrand"].get<std::string>();
        }
        if (j.contains("domain")) dom_json = j["domain"];
    } else if (!a.domain.empty()) {
        dom_json = a.domain;
    }
    if (a.m < 1) throw ConfigError("m", "must be positive");
    const Context ctx = make_context(2, a.m);
    const Elem ex = parse_field(ctx, a.exponent, "exponent");
    const Elem integrand = parse_field(ctx, a.integrand, "integrand");

    // The pure-coefficient part of the exponent may only be the x-Gaussian -|x|^2.
    Elem rest(ctx);
    Coef xpart(ctx.nvars());
    for (const auto& [mono, c] : ex.terms()) {
        if (mono.is_unit()) xpart = c;
        else rest.add_term(mono, c);
    }
    Coef minus_sq(ctx.nvars());
    for (std::size_t i = 0; i < ctx.nvars(); ++i) minus_sq -= Coef::variable(ctx.nvars(), i) * Coef::variable(ctx.nvars(), i);
    if (!xpart.is_zero() && !(xpart == minus_sq))
        throw ConfigError("exponent", "the only supported x-dependent weight is -(x1^2 + ... + xm^2)");
    PseudoGorm g;
    try {
        g = exp_gorm(rest);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("exponent", e.what());
    }
    g.gaussian_x = !xpart.is_zero();
    g.poly = g.poly * integrand;

    Domain d = g.gaussian_x ? Domain::gaussian() : Domain::plane();
    if (!dom_json.is_null()) d = io::parse_domain(dom_json, ctx.nvars());

    QuadSettings s;
    s.nodes = a.nodes;
    s.workers = a.workers;
    const GormIntegral r = integrate_gorm(g, d, s);
    if (a.out.json())
        emit(Json{{"value", r.value},
                  {"error_estimate", r.error_estimate},
                  {"symbolic_zero", r.symbolic_zero},
                  {"domain", d.name()},
                  {"nodes_per_axis", s.nodes},
                  {"evaluations", r.evaluations}});
    else std::cout << std::setprecision(17) << r.value << "\n";
    return kOk;
}

// euler ---------------------------------------------------------------------

struct EulerArgs {
    std::string metric;
    std::size_t nodes = 400;
    unsigned workers = 0;
    bool no_refine = false;
    Output out;
};

int run_euler(const EulerArgs& a) {
    const MetricSpec g = io::parse_metric(io::read_json_file(a.metric));
    QuadSettings s;
    s.nodes = a.nodes;
    s.workers = a.workers;
    s.refine_check = !a.no_refine;
    const EulerReport r = euler_integral(g, s);
    if (a.out.json()) emit(io::to_json(r));
    else {
        std::cout << std::setprecision(12) << "value " << r.value << " (error estimate " << r.error_estimate << ")\n";
        if (r.predicted) std::cout << "predicted " << *r.predicted << ", relative error " << *r.relative_error << "\n";
        std::cout << r.sign_note << "\n";
        for (const auto& w : r.warnings) std::cout << "warning: " << w << "\n";
    }
    return kOk;
}

// decompose -----------------------------------------------------------------

struct DecomposeArgs {
    int m = 2;
    int max_degree = 4;
    std::string convention = "e12";
    Output out;
};

int run_decompose(const DecomposeArgs& a) {
    if (a.m < 1) throw ConfigError("--m", "must be positive");
    if (a.max_degree < 0) throw ConfigError("--max-degree", "must be nonnegative");
    const DecomposeReport r = decompose_report(a.m, a.max_degree, a.convention == "e21" ? RaisingConvention::E21 : RaisingConvention::E12);
    if (a.out.json()) emit(io::to_json(r));
    else std::cout << io::text_table(r);
    return r.consistent() ? kOk : kFailed;
}

// cohomology ----------------------------------------------------------------

struct CohomologyArgs {
    std::string diff;
    int m = 1;
    int trunc = 3;
    std::string coefficients;
    Output out;
};

int run_cohomology(const CohomologyArgs& a) {
    if (a.m < 1) throw ConfigError("--m", "must be positive");
    if (a.trunc < 0) throw ConfigError("--trunc", "must be nonnegative");
    const bool n1 = a.diff == "d";
    const Context ctx = make_context(n1 ? 1 : 2, a.m);
    Deriv d;
    if (n1) d = d_op(ctx, 1);
    else if (a.diff == "d1" || a.diff == "d2") d = d_op(ctx, a.diff[1] - '0');
    else d = r_op(ctx, a.diff[1] - '0');
    TruncationSpec t{a.trunc, a.coefficients.empty() ? d.is_fiberwise() : a.coefficients == "constant"};
    if (!d.is_fiberwise() && t.constant_coefficients)
        throw ConfigError("--coefficients", a.diff + " does not preserve constant coefficients");
    const BettiReport r = betti(d, t, a.diff);
    if (a.out.json()) {
        Json j = io::to_json(r);
        j["n"] = ctx.n();
        j["m"] = a.m;
        if (!n1) {
            Json p = Json::array();
            for (int dir = 1; dir <= 2; ++dir) p.push_back(io::to_json(pairing_report(d, dir, t)));
            j["pairings"] = p;
        }
        emit(j);
    } else {
        std::cout << "H(" << a.diff << "), m = " << a.m << ", weight <= " << t.max_weight << " ("
                  << (t.constant_coefficients ? "constant" : "polynomial") << " coefficients)\n";
        for (const auto& e : r.entries) {
            std::cout << "  (";
            for (std::size_t i = 0; i < e.multidegree.size(); ++i) std::cout << (i ? "," : "") << e.multidegree[i];
            std::cout << "): " << e.betti << (e.stable ? "" : " (unstable, next " + std::to_string(e.betti_next) + ")") << "\n";
        }
    }
    return r.all_stable() ? kOk : kFailed;
}

// tetris, schur -------------------------------------------------------------

YoungTable table_from(const std::vector<int>& rows) {
    try {
        return YoungTable(rows);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("--table", e.what());
    }
}

struct TableArgs {
    std::vector<int> rows;
    int m = 0;
    Output out;
};

int run_tetris(const TableArgs& a) {
    const YoungTable t = table_from(a.rows);
    std::vector<YoungTable> seq;
    try {
        seq = tetris_sequence(t);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("--table", e.what());
    }
    if (a.out.json()) {
        Json pieces = Json::array();
        for (const auto& p : seq) {
            Json x{{"table", p.to_string()}};
            if (a.m > 0) x["schur_dim"] = schur_dim(p, a.m).get_str();
            pieces.push_back(std::move(x));
        }
        Json j{{"table", t.to_string()}, {"pieces", pieces}};
        if (a.m > 0) j["tilde_dim"] = tilde_dim(t, a.m).get_str();
        emit(j);
    } else {
        for (std::size_t i = 0; i < seq.size(); ++i) {
            std::cout << (i ? " -> " : "") << seq[i].to_string();
            if (a.m > 0) std::cout << "[" << schur_dim(seq[i], a.m).get_str() << "]";
        }
        std::cout << "\n";
        if (a.m > 0) std::cout << "tilde_dim " << tilde_dim(t, a.m).get_str() << "\n";
    }
    return kOk;
}

int run_schur(const TableArgs& a) {
    const YoungTable t = table_from(a.rows);
    if (a.m < 1) throw ConfigError("--m", "must be positive");
    const mpz_class d = schur_dim(t, a.m);
    if (a.out.json()) emit(Json{{"table", t.to_string()}, {"m", a.m}, {"dim", d.get_str()}});
    else std::cout << d.get_str() << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gorms: differential gorms and worms"};
    app.require_subcommand(1, 1);

    CheckArgs check;
    auto* c = app.add_subcommand("check", "run invariant suites; stops at the first violated identity");
    c->add_option("--suite", check.suites, "suite name (repeatable); default runs all")
        ->check(CLI::IsMember(verify::suite_names()));
    c->add_flag("--keep-going", check.keep_going, "report every check instead of stopping at the first failure");
    c->add_option("--workers", check.workers, "quadrature workers (0 = available parallelism)");
    check.out.add_flag(c, "text");

    TransformArgs tr;
    auto* t = app.add_subcommand("transform", "apply an operator to a worm");
    t->add_option("--n", tr.n, "number of differentials")->capture_default_str();
    t->add_option("--m", tr.m, "chart dimension")->capture_default_str();
    t->add_option("--expr", tr.expr, "element, e.g. 'x1^2*d1(x1)'")->required();
    t->add_option("--op", tr.op, "d<a>, r<a>, e<ab>, lie, iota, pullback, mat2")->required();
    t->add_option("--field", tr.field, "comma-separated components for lie, iota, pullback");
    t->add_option("--matrix", tr.matrix, "a,b,c,d for mat2")->delimiter(',');
    tr.out.add_flag(t, "json");

    IntegrateArgs in;
    auto* i = app.add_subcommand("integrate", "Berezin integral of exp(exponent) * integrand");
    i->add_option("--m", in.m, "chart dimension")->capture_default_str();
    auto* ex_opt = i->add_option("--exponent", in.exponent, "even exponent, e.g. '-x1^2 - d12(x1)^2'");
    i->add_option("--integrand", in.integrand, "polynomial gorm")->capture_default_str();
    i->add_option("--domain", in.domain, "plane or gaussian (default: gaussian when the exponent has -|x|^2)");
    auto* cfg_opt = i->add_option("--config", in.config, "JSON file with m, exponent, integrand, domain");
    ex_opt->excludes(cfg_opt);
    i->add_option("--nodes", in.nodes, "quadrature nodes per axis")->capture_default_str()->check(CLI::Range(2, 100000));
    i->add_option("--workers", in.workers, "quadrature workers (0 = available parallelism)");
    in.out.add_flag(i, "json");

    EulerArgs eu;
    auto* e = app.add_subcommand("euler", "integral of exp(d1 d2 beta) for a metric");
    e->add_option("--metric", eu.metric, "metric JSON file")->required();
    e->add_option("--nodes", eu.nodes, "quadrature nodes per axis")->capture_default_str()->check(CLI::Range(2, 100000));
    e->add_option("--workers", eu.workers, "quadrature workers (0 = available parallelism)");
    e->add_flag("--no-refine", eu.no_refine, "skip the half-resolution error estimate");
    eu.out.add_flag(e, "json");

    DecomposeArgs de;
    auto* dc = app.add_subcommand("decompose", "fiber decomposition report");
    dc->add_option("--m", de.m, "chart dimension")->required();
    dc->add_option("--max-degree", de.max_degree, "largest p + q")->required();
    dc->add_option("--convention", de.convention, "raising operator")->check(CLI::IsMember({"e12", "e21"}))->capture_default_str();
    de.out.add_flag(dc, "json");

    CohomologyArgs co;
    auto* h = app.add_subcommand("cohomology", "Betti numbers of a truncated worm complex");
    h->add_option("--diff", co.diff, "d (n = 1), d1, d2, r1, r2")->required()->check(CLI::IsMember({"d", "d1", "d2", "r1", "r2"}));
    h->add_option("--m", co.m, "chart dimension")->capture_default_str();
    h->add_option("--trunc", co.trunc, "maximal weight")->capture_default_str();
    h->add_option("--coefficients", co.coefficients, "constant or polynomial (default: constant for r1, r2)")
        ->check(CLI::IsMember({"constant", "polynomial"}));
    co.out.add_flag(h, "json");

    TableArgs te;
    auto* tt = app.add_subcommand("tetris", "cotangent tetris sequence of a two-column table");
    tt->add_option("--table", te.rows, "row lengths, e.g. 2,2,1")->required()->delimiter(',');
    tt->add_option("--m", te.m, "also print Schur dimensions for this m");
    te.out.add_flag(tt, "text");

    TableArgs sc;
    auto* s = app.add_subcommand("schur", "dimension of a Schur module");
    s->add_option("--table", sc.rows, "row lengths, e.g. 2,2")->required()->delimiter(',');
    s->add_option("--m", sc.m, "dimension of the vector space")->required();
    sc.out.add_flag(s, "text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? kOk : kUsage;
    }

    try {
        if (*c) return run_check(check);
        if (*t) return run_transform(tr);
        if (*i) {
            if (in.exponent.empty() && in.config.empty()) throw ConfigError("--exponent", "required unless --config is given");
            return run_integrate(in);
        }
        if (*e) return run_euler(eu);
        if (*dc) return run_decompose(de);
        if (*h) return run_cohomology(co);
        if (*tt) return run_tetris(te);
        if (*s) return run_schur(sc);
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kUsage;
    } catch (const ParseError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kUsage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kFailed;
    }
    return kUsage;
}
