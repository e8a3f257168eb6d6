#pragma once

// Test-only oracles and random-input generators. The oracles here are the
// independent verification paths (pairing enumeration, brute-force linear
// algebra); they must not share code with the implementation they check.

#include <functional>
#include <random>
#include <vector>

#include "twderham/milnor.hpp"
#include "twderham/perturb.hpp"

namespace twd::testing {

using Rng = std::mt19937_64;

inline mpq_class random_rational(Rng& rng, int max_num = 9, int max_den = 4) {
    std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline SquareMatrix random_symmetric_invertible_q(Rng& rng, int n) {
    const RingSpec qq = RingSpec::rationals();
    while (true) {
        SquareMatrix a(qq, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                RingElement v = qq.from_mpq(random_rational(rng));
                a.set(i, j, v);
                a.set(j, i, v);
            }
        if (!a.det().is_zero()) return a;
    }
}

inline SquareMatrix random_unimodular_symmetric_z(Rng& rng, int n) {
    const RingSpec zz = RingSpec::integers();
    std::uniform_int_distribution<int> small(-2, 2), pm(0, 1);
    SquareMatrix u(zz, n), d(zz, n);
    for (int i = 0; i < n; ++i) {
        u.set(i, i, zz.one());
        d.set(i, i, zz.from_int(pm(rng) ? 1 : -1));
        for (int j = i + 1; j < n; ++j) u.set(i, j, zz.from_int(small(rng)));
    }
    SquareMatrix ut(zz, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ut.set(i, j, u.at(j, i));
    return ut * (d * u);
}

inline Poly random_poly(Rng& rng, const RingSpec& spec, int nvars, int max_deg, int terms,
                        bool integer_coeffs = false) {
    Poly p(spec, nvars);
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_int_distribution<int> coeff(-5, 5);
    for (int t = 0; t < terms; ++t) {
        std::vector<int> e(static_cast<size_t>(nvars), 0);
        int budget = deg(rng);
        for (int i = 0; i < nvars && budget > 0; ++i) {
            std::uniform_int_distribution<int> part(0, budget);
            e[static_cast<size_t>(i)] = part(rng);
            budget -= e[static_cast<size_t>(i)];
        }
        mpq_class c = integer_coeffs ? mpq_class(coeff(rng)) : random_rational(rng, 5, 3);
        if (c == 0) c = 1;
        p.add_term(Monomial(std::move(e)), spec.from_mpq(c));
    }
    return p;
}

inline Form random_form(Rng& rng, const RingSpec& spec, int nvars, int max_deg) {
    Form f(spec, nvars);
    std::uniform_int_distribution<uint64_t> mask(0, (uint64_t(1) << nvars) - 1);
    f.add_component(mask(rng), random_poly(rng, spec, nvars, max_deg, 2));
    return f;
}

/// Gaussian expectation of a polynomial by pairing enumeration.
inline RingElement gaussian_expectation(const SquareMatrix& a, const Poly& p) {
    RingElement acc = a.spec().zero();
    for (const auto& [m, c] : p.terms()) acc += c * wick_oracle(a, m);
    return acc;
}

/// Independent oracle for the full lambda expansion:
/// <g e^{lambda V}> / <e^{lambda V}>, both sides expanded by Wick
/// enumeration, the ratio taken as a truncated series.
inline LambdaSeries wick_ratio_oracle(const SquareMatrix& a, const Poly& v, const Poly& g,
                                      int order) {
    const RingSpec& spec = a.spec();
    LambdaSeries num(spec, order), den(spec, order);
    Poly vpow = Poly::constant(spec, v.nvars(), spec.one());
    mpq_class factorial(1);
    for (int k = 0; k < order; ++k) {
        if (k > 0) {
            vpow = vpow * v;
            factorial *= k;
        }
        RingElement inv_fact = spec.from_mpq(mpq_class(1) / factorial);
        num.set_coeff(k, gaussian_expectation(a, g * vpow) * inv_fact);
        den.set_coeff(k, gaussian_expectation(a, vpow) * inv_fact);
    }
    // den has constant term <1> = 1; invert by series recursion.
    LambdaSeries inv(spec, order);
    inv.set_coeff(0, den.coeff(0).inverse());
    for (int k = 1; k < order; ++k) {
        RingElement acc = spec.zero();
        for (int j = 1; j <= k; ++j) acc += den.coeff(j) * inv.coeff(k - j);
        inv.set_coeff(k, -(inv.coeff(0) * acc));
    }
    return num * inv;
}

/// Brute-force Milnor number: rank computation of the degree-truncated
/// Jacobian ideal over Q, stabilized over increasing degree bounds.
/// Intended for quasi-homogeneous f with isolated singularities.
inline int milnor_mu_bruteforce(const Poly& f, int max_bound = 24) {
    const int nv = f.nvars();
    std::vector<Poly> gens;
    for (int a = 0; a < nv; ++a) gens.push_back(f.derivative(a));

    auto monomials_up_to = [&](int bound) {
        std::vector<Monomial> out;
        std::vector<int> e(static_cast<size_t>(nv), 0);
        std::function<void(int, int)> rec = [&](int var, int rem) {
            if (var == nv) {
                out.emplace_back(e);
                return;
            }
            for (int k = 0; k <= rem; ++k) {
                e[static_cast<size_t>(var)] = k;
                rec(var + 1, rem - k);
            }
            e[static_cast<size_t>(var)] = 0;
        };
        rec(0, bound);
        return out;
    };

    auto rank_of = [](std::vector<std::vector<mpq_class>>& rows, size_t cols) -> size_t {
        size_t rank = 0;
        for (size_t col = 0; col < cols && rank < rows.size(); ++col) {
            size_t sel = rank;
            while (sel < rows.size() && rows[sel][col] == 0) ++sel;
            if (sel == rows.size()) continue;
            std::swap(rows[sel], rows[rank]);
            for (size_t i = rank + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                mpq_class fct = rows[i][col] / rows[rank][col];
                for (size_t j = col; j < cols; ++j) rows[i][j] -= fct * rows[rank][j];
            }
            ++rank;
        }
        return rank;
    };

    // dim of span(multiples of degree <= bound + slack) intersected with
    // the degree <= bound slice: rank(all columns) - rank(columns > bound).
    // The slack lets total-degree cancellations of weighted-homogeneous
    // generators resolve.
    auto quotient_dim_at = [&](int bound, int slack) -> int {
        std::vector<Monomial> cols = monomials_up_to(bound + slack);
        // order columns by descending degree so the > bound block comes first
        std::sort(cols.begin(), cols.end(),
                  [](const Monomial& a, const Monomial& b) { return b.total_degree() < a.total_degree(); });
        size_t high_cols = 0;
        while (high_cols < cols.size() && cols[high_cols].total_degree() > bound) ++high_cols;
        auto col_index = [&](const Monomial& m) -> int {
            for (size_t i = 0; i < cols.size(); ++i)
                if (cols[i] == m) return static_cast<int>(i);
            return -1;
        };
        std::vector<std::vector<mpq_class>> rows;
        for (const Poly& gen : gens) {
            if (gen.is_zero()) continue;
            int gd = gen.total_degree();
            for (const Monomial& m : monomials_up_to(bound + slack - gd)) {
                std::vector<mpq_class> row(cols.size(), mpq_class(0));
                Poly shifted = Poly::from_monomial(f.spec(), m, f.spec().one()) * gen;
                for (const auto& [mono, c] : shifted.terms())
                    row[static_cast<size_t>(col_index(mono))] = c.rational_value();
                rows.push_back(std::move(row));
            }
        }
        auto rows_high = rows;
        for (auto& r : rows_high) r.resize(high_cols);
        size_t rank_high = rank_of(rows_high, high_cols);
        size_t rank_all = rank_of(rows, cols.size());
        int low_monomials = static_cast<int>(cols.size() - high_cols);
        return low_monomials - static_cast<int>(rank_all - rank_high);
    };

    auto stable_dim_at = [&](int bound) -> int {
        int prev = -1, streak = 0;
        for (int slack = 0; slack <= max_bound; ++slack) {
            int dim = quotient_dim_at(bound, slack);
            streak = (dim == prev) ? streak + 1 : 0;
            if (streak >= 2) return dim;
            prev = dim;
        }
        return prev;
    };

    int prev = -1, streak = 0;
    for (int bound = 2; bound <= max_bound; ++bound) {
        int dim = stable_dim_at(bound);
        streak = (dim == prev) ? streak + 1 : 0;
        if (streak >= 2) return dim;  // stabilized over two steps
        prev = dim;
    }
    return prev;
}

}  // namespace twd::testing
