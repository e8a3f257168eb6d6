#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include <json.hpp>

#include "twderham/constraints.hpp"
#include "twderham/dwork.hpp"
#include "twderham/families.hpp"
#include "twderham/milnor.hpp"
#include "twderham/parse.hpp"
#include "twderham/perturb.hpp"
#include "twderham/selftest.hpp"

using json = nlohmann::ordered_json;
using namespace twd;

namespace {

// Exit codes: 0 success, 1 computation error (module error name in the
// payload), 2 input/validation error.
constexpr int kOkExit = 0;
constexpr int kComputeExit = 1;
constexpr int kInputExit = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> x_names(int n) { return Poly::default_names(n); }

/// Highest x<i> index used in the expression (so `--f "x1^3+x2^3"` works
/// without a separate --n flag).
int detect_xvars(const std::string& text) {
    int best = 0;
    for (size_t i = 0; i + 1 < text.size(); ++i) {
        if (text[i] != 'x') continue;
        if (i > 0 && (isalnum(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '_'))
            continue;
        size_t j = i + 1;
        std::string digits;
        while (j < text.size() && isdigit(static_cast<unsigned char>(text[j])))
            digits.push_back(text[j++]);
        if (!digits.empty()) best = std::max(best, std::stoi(digits));
    }
    return best;
}

/// Rebuild a polynomial parsed in x1..xk+lambda over K into a polynomial
/// over K[lambda]/(lambda^N) in x1..xk.
Poly fold_lambda(const Poly& p, const RingSpec& series, int n) {
    Poly out(series, n);
    int order = series.order();
    for (const auto& [m, c] : p.terms()) {
        int e = m.exponent(n);
        if (e >= order) continue;  // lambda^e truncates away
        std::vector<RingElement> coeffs(static_cast<size_t>(order), series.base().zero());
        coeffs[static_cast<size_t>(e)] = c;
        std::vector<int> ev(m.exponents().begin(), m.exponents().begin() + n);
        out.add_term(Monomial(std::move(ev)), RingElement(series, std::move(coeffs)));
    }
    return out;
}

void emit(const json& payload, const std::string& format) {
    if (format == "json") {
        std::cout << payload.dump() << "\n";
        return;
    }
    // text: flat "key: value" lines
    for (const auto& [k, v] : payload.items())
        std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

uint64_t env_seed() {
    const char* s = std::getenv("TWDERHAM_SEED");
    if (!s) return 0;
    return std::strtoull(s, nullptr, 10);
}

int cmd_integrate(const std::string& ring_text, int n, const std::string& a_text,
                  const std::string& v_text, const std::string& g_text, int order,
                  const std::string& pivot, uint64_t seed, const std::string& format) {
    RingSpec ring = RingSpec::integers();
    SquareMatrix a(RingSpec::integers(), 1);
    Poly v, g;
    try {
        ring = RingSpec::parse(ring_text);
        if (ring.has_torsion())
            throw InputError("TorsionRing: --ring " + ring_text +
                             " has torsion; normalized integrals need ZZ, QQ or a series over those");
        if (ring.kind() == RingSpec::Kind::Series)
            throw InputError("--ring: pass the base ring; the lambda series is implied by --order");
        a = SquareMatrix::parse(ring, a_text);
        if (n == 0) n = a.size();
        if (a.size() != n)
            throw InputError("--A: matrix is " + std::to_string(a.size()) + "x" +
                             std::to_string(a.size()) + " but --n is " + std::to_string(n));
        std::vector<std::string> names = x_names(n);
        names.push_back("lambda");
        RingSpec series = RingSpec::series(ring, "lambda", order);
        v = parse_poly(ring, v_text, x_names(n));
        g = fold_lambda(parse_poly(ring, g_text, names), series, n);
    } catch (const Error& e) {
        throw InputError(e.what());
    }

    GaussianProblem problem(a, v, order);
    IntegrateOptions opts;
    opts.pivot = pivot == "random" ? PivotStrategy::Random : PivotStrategy::Leftmost;
    opts.seed = seed;
    LambdaSeries s = integrate(problem, g, opts);

    json out;
    out["lambda_order"] = order;
    json coeffs = json::array();
    for (int i = 0; i < order; ++i) coeffs.push_back(s.coeff(i).str());
    out["coefficients"] = coeffs;
    if (problem.constant_dropped) out["warning"] = "constant term of V dropped (normalization)";
    emit(out, format);
    return kOkExit;
}

int cmd_milnor(const std::string& f_text, const std::string& format) {
    Poly f;
    int n = 0;
    try {
        n = detect_xvars(f_text);
        if (n == 0) throw InputError("--f: no x variables found");
        f = parse_poly(RingSpec::rationals(), f_text, x_names(n));
    } catch (const Error& e) {
        throw InputError(e.what());
    }
    MilnorData md = milnor_basis(f);
    json out;
    out["mu"] = md.mu();
    json basis = json::array();
    for (const auto& b : md.basis) basis.push_back(b.str(x_names(n)));
    out["basis"] = basis;
    emit(out, format);
    return kOkExit;
}

int cmd_reduce(const std::string& f_text, const std::string& g_text, const std::string& format) {
    Poly f, g;
    int n = 0;
    try {
        n = std::max(detect_xvars(f_text), detect_xvars(g_text));
        if (n == 0) throw InputError("--f: no x variables found");
        f = parse_poly(RingSpec::rationals(), f_text, x_names(n));
        g = parse_poly(RingSpec::rationals(), g_text, x_names(n));
    } catch (const Error& e) {
        throw InputError(e.what());
    }
    MilnorData md = milnor_basis(f);
    auto coords = reduce_nform(md, g);
    bool witness_ok = true;
    try {
        exactness_witness(md, g, coords);
    } catch (const Error&) {
        witness_ok = false;
    }
    json out;
    out["mu"] = md.mu();
    json basis = json::array();
    for (const auto& b : md.basis) basis.push_back(b.str(x_names(n)));
    out["basis"] = basis;
    json cs = json::array();
    for (const auto& c : coords) cs.push_back(c.str());
    out["coordinates"] = cs;
    out["witness_available"] = witness_ok;
    emit(out, format);
    return kOkExit;
}

int cmd_picard_fuchs(const std::string& f_text, const std::string& seed_text, uint64_t seed,
                     const std::string& format) {
    Poly f, g0;
    try {
        int n = detect_xvars(f_text);
        if (n == 0) throw InputError("--f: no x variables found");
        std::vector<std::string> names = x_names(n);
        names.push_back("lambda");
        f = parse_poly(RingSpec::rationals(), f_text, names);
        g0 = parse_poly(RingSpec::rationals(), seed_text, names);
    } catch (const Error& e) {
        throw InputError(e.what());
    }
    FamilyProblem fam(f, seed);
    PicardFuchsOperator op = picard_fuchs(fam, g0);
    json out;
    out["order"] = op.order();
    json coeffs = json::array();
    for (const auto& p : op.coeffs) coeffs.push_back(p.str("lambda"));
    out["coefficients"] = coeffs;
    out["operator"] = op.str();
    emit(out, format);
    return kOkExit;
}

int cmd_delta(const std::string& p_text, const std::string& omega_text, bool codim,
              const std::vector<std::string>& constraint_texts, const std::string& f_text,
              uint64_t seed, const std::string& format) {
    const RingSpec qq = RingSpec::rationals();
    json out;
    try {
        if (!codim) {
            int n = std::max(detect_xvars(p_text), detect_xvars(omega_text));
            if (n == 0) throw InputError("--P: no x variables found");
            Poly p = parse_poly(qq, p_text, x_names(n));
            Form omega = parse_form(qq, omega_text, x_names(n));
            Form image = delta_map(p, omega);
            std::vector<std::string> names = x_names(n);
            names.push_back("t");
            out["form"] = image.str(names);
        } else {
            if (constraint_texts.empty())
                throw InputError("--codim requires at least one --constraint");
            int n = detect_xvars(omega_text);
            for (const auto& t : constraint_texts) n = std::max(n, detect_xvars(t));
            n = std::max(n, detect_xvars(f_text));
            if (n == 0) throw InputError("no x variables found");
            std::vector<Poly> cs;
            for (const auto& t : constraint_texts) cs.push_back(parse_poly(qq, t, x_names(n)));
            Poly f = parse_poly(qq, f_text, x_names(n));
            Form omega = parse_form(qq, omega_text, x_names(n));
            ConstraintProblem cp(f, cs, seed);
            Form image = codim_m_map(cp, omega);
            std::vector<std::string> names = x_names(n);
            int m = static_cast<int>(cs.size());
            for (int i = 1; i <= m; ++i) names.push_back(m == 1 ? "t" : "t" + std::to_string(i));
            out["form"] = image.str(names);
            out["degree_shift"] = 2 * m;
            out["regularity_ok"] = cp.regularity_ok;
            if (!cp.regularity_ok) out["regularity_note"] = cp.regularity_note;
        }
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        if (std::string(e.name()) == "ParseError") throw InputError(e.what());
        throw;
    }
    emit(out, format);
    return kOkExit;
}

int cmd_frobenius(int p, int precision, int cutoff, const std::string& f_text,
                  const std::string& format) {
    RingSpec ring = RingSpec::integers();
    Poly f;
    try {
        ring = RingSpec::pi_adic(p, precision, cutoff);
        if (detect_xvars(f_text) > 1) throw InputError("--f: one variable only");
        f = parse_poly(RingSpec::rationals(), f_text, {"x1"});
    } catch (const Error& e) {
        throw InputError(e.what());
    }
    FrobeniusEigenvalue ev = frobenius_eigenvalue(ring, f, cutoff);
    json out;
    out["alpha"] = ev.alpha.str();
    out["valuation"] = ev.valuation.get_str();
    out["alpha_squared_mod"] = pi_adic_truncate(ev.alpha_squared, ev.squared_horizon).str();
    out["precision_ok"] = ev.precision_ok;
    out["horizon"] = ev.horizon.get_str();
    emit(out, format);
    return kOkExit;
}

int cmd_selftest(uint64_t seed, const std::string& only, const std::string& scale,
                 long time_budget_ms, const std::string& format) {
    AcceptanceConfig cfg;
    cfg.seed = seed;
    cfg.only = only;
    cfg.full_scale = scale == "full";
    cfg.time_budget_ms = time_budget_ms;
    AcceptanceReport report = run_acceptance(cfg, format == "json" ? nullptr : &std::cout);
    if (format == "json") {
        json out;
        json rows = json::array();
        for (const auto& r : report.results) {
            json row;
            row["index"] = r.index;
            row["name"] = r.name;
            row["passed"] = r.passed;
            row["seconds"] = r.seconds;
            row["detail"] = r.detail;
            rows.push_back(row);
        }
        out["criteria"] = rows;
        out["all_passed"] = report.all_passed();
        std::cout << out.dump() << "\n";
    }
    return report.all_passed() ? kOkExit : kComputeExit;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"twderham: twisted de Rham cohomology engine"};
    app.require_subcommand(1);

    std::string format = "json";
    long time_budget_ms = 0;
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--time-budget-ms", time_budget_ms, "soft time budget for selftest");

    // integrate
    auto* integrate_cmd = app.add_subcommand("integrate", "perturbative normalized integral");
    std::string ring_text = "ZZ", a_text, v_text = "0", g_text = "1", pivot = "leftmost";
    int n = 0, order = 4;
    uint64_t seed = env_seed();
    integrate_cmd->add_option("--ring", ring_text, "coefficient ring (ZZ, QQ, ...)");
    integrate_cmd->add_option("--n", n, "number of variables");
    integrate_cmd->add_option("--A", a_text, "symmetric matrix, e.g. [-1] or [a,b;c,d]")->required();
    integrate_cmd->add_option("--V", v_text, "perturbation potential");
    integrate_cmd->add_option("--g", g_text, "integrand");
    integrate_cmd->add_option("--order", order, "lambda truncation order");
    integrate_cmd->add_option("--pivot", pivot, "rewriting pivot strategy")
        ->check(CLI::IsMember({"leftmost", "random"}));
    integrate_cmd->add_option("--seed", seed, "random pivot seed");

    // milnor
    auto* milnor_cmd = app.add_subcommand("milnor", "Milnor ring basis and dimension");
    std::string f_text;
    milnor_cmd->add_option("--f", f_text, "polynomial over QQ")->required();

    // reduce
    auto* reduce_cmd = app.add_subcommand("reduce", "reduce an n-form to the Milnor basis");
    std::string rf_text, rg_text;
    reduce_cmd->add_option("--f", rf_text, "polynomial over QQ")->required();
    reduce_cmd->add_option("--g", rg_text, "n-form coefficient g")->required();

    // picard-fuchs
    auto* pf_cmd = app.add_subcommand("picard-fuchs", "Picard-Fuchs operator of a family");
    std::string pf_f, pf_seed = "1";
    uint64_t pf_rng_seed = env_seed();
    pf_cmd->add_option("--f", pf_f, "family exponent in x and lambda")->required();
    pf_cmd->add_option("--seed", pf_seed, "seed class g0 (a polynomial)");
    pf_cmd->add_option("--rng-seed", pf_rng_seed, "genericity sampling seed");

    // delta
    auto* delta_cmd = app.add_subcommand("delta", "constraint / delta-function chain maps");
    std::string dp_text = "0", domega_text = "1", df_text = "0";
    bool codim = false;
    std::vector<std::string> constraint_texts;
    uint64_t delta_seed = env_seed();
    delta_cmd->add_option("--P", dp_text, "hypersurface polynomial");
    delta_cmd->add_option("--omega", domega_text, "form on Y");
    delta_cmd->add_flag("--codim", codim, "codimension-m mode");
    delta_cmd->add_option("--constraint", constraint_texts, "constraint polynomial (repeatable)");
    delta_cmd->add_option("--f", df_text, "ambient exponent f on Y (codim mode)");
    delta_cmd->add_option("--seed", delta_seed, "regularity sampling seed");

    // frobenius
    auto* frob_cmd = app.add_subcommand("frobenius", "Dwork Frobenius eigenvalue");
    int fp = 5, fN = 20, fD = 60;
    std::string ff_text = "x1^2/2";
    frob_cmd->add_option("--p", fp, "odd prime")->required();
    frob_cmd->add_option("--N", fN, "p-adic precision");
    frob_cmd->add_option("--D", fD, "series cutoff degree");
    frob_cmd->add_option("--f", ff_text, "one-variable exponent over QQ");

    // selftest
    auto* self_cmd = app.add_subcommand("selftest", "run the acceptance criteria (reduced sizes)");
    std::string only, scale = "small";
    uint64_t st_seed = env_seed();
    self_cmd->add_option("--only", only, "run only criteria whose name contains this");
    self_cmd->add_option("--seed", st_seed, "randomized-test seed");
    self_cmd->add_option("--scale", scale, "small or full")
        ->check(CLI::IsMember({"small", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "input error: " << e.what() << "\n";
        return kInputExit;
    }

    try {
        if (integrate_cmd->parsed())
            return cmd_integrate(ring_text, n, a_text, v_text, g_text, order, pivot, seed, format);
        if (milnor_cmd->parsed()) return cmd_milnor(f_text, format);
        if (reduce_cmd->parsed()) return cmd_reduce(rf_text, rg_text, format);
        if (pf_cmd->parsed()) return cmd_picard_fuchs(pf_f, pf_seed, pf_rng_seed, format);
        if (delta_cmd->parsed())
            return cmd_delta(dp_text, domega_text, codim, constraint_texts, df_text, delta_seed,
                             format);
        if (frob_cmd->parsed()) return cmd_frobenius(fp, fN, fD, ff_text, format);
        if (self_cmd->parsed()) return cmd_selftest(st_seed, only, scale, time_budget_ms, format);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputExit;
    } catch (const Error& e) {
        json out;
        out["error"] = e.name();
        out["detail"] = e.what();
        std::cout << out.dump() << "\n";
        return kComputeExit;
    }
    return kInputExit;
}
