#include "twderham/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace twd {

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(std::vector<int> exponents) : e_(std::move(exponents)) {
    for (int x : e_)
        if (x < 0) fail("InvalidExponent", "negative exponent in monomial");
}

Monomial Monomial::one(int nvars) { return Monomial(std::vector<int>(static_cast<size_t>(nvars), 0)); }

Monomial Monomial::var(int nvars, int i, int power) {
    std::vector<int> e(static_cast<size_t>(nvars), 0);
    e[static_cast<size_t>(i)] = power;
    return Monomial(std::move(e));
}

int Monomial::total_degree() const { return std::accumulate(e_.begin(), e_.end(), 0); }

Monomial Monomial::operator*(const Monomial& o) const {
    std::vector<int> e(e_);
    for (size_t i = 0; i < e.size(); ++i) e[i] += o.e_[i];
    return Monomial(std::move(e));
}

bool Monomial::divides(const Monomial& o) const {
    for (size_t i = 0; i < e_.size(); ++i)
        if (e_[i] > o.e_[i]) return false;
    return true;
}

Monomial Monomial::divide_by(const Monomial& o) const {
    std::vector<int> e(e_);
    for (size_t i = 0; i < e.size(); ++i) e[i] -= o.e_[i];
    return Monomial(std::move(e));
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
    std::vector<int> e(a.e_);
    for (size_t i = 0; i < e.size(); ++i) e[i] = std::max(e[i], b.e_[i]);
    return Monomial(std::move(e));
}

Monomial Monomial::decremented(int i) const {
    std::vector<int> e(e_);
    e[static_cast<size_t>(i)] -= 1;
    return Monomial(std::move(e));
}

bool Monomial::degrevlex_less(const Monomial& a, const Monomial& b) {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    // Equal degree: a < b iff the last nonzero entry of a - b is positive.
    for (size_t i = a.e_.size(); i-- > 0;) {
        int d = a.e_[i] - b.e_[i];
        if (d != 0) return d > 0;
    }
    return false;
}

bool Monomial::display_less(const Monomial& a, const Monomial& b) {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    // x1-major: larger exponent on an earlier variable lists first.
    for (size_t i = 0; i < a.e_.size(); ++i) {
        int d = a.e_[i] - b.e_[i];
        if (d != 0) return d > 0;
    }
    return false;
}

std::string Monomial::str(const std::vector<std::string>& names) const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < e_.size(); ++i) {
        if (e_[i] == 0) continue;
        if (!first) os << "*";
        first = false;
        os << names[i];
        if (e_[i] > 1) os << "^" << e_[i];
    }
    return first ? "1" : os.str();
}

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(RingSpec spec, int nvars) : spec_(std::move(spec)), nvars_(nvars) {
    if (nvars < 0) fail("InvalidArgument", "negative variable count");
}

Poly Poly::constant(const RingSpec& spec, int nvars, const RingElement& c) {
    Poly p(spec, nvars);
    p.add_term(Monomial::one(nvars), c);
    return p;
}

Poly Poly::variable(const RingSpec& spec, int nvars, int i) {
    Poly p(spec, nvars);
    p.add_term(Monomial::var(nvars, i), spec.one());
    return p;
}

Poly Poly::from_monomial(const RingSpec& spec, const Monomial& m, const RingElement& c) {
    Poly p(spec, m.nvars());
    p.add_term(m, c);
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

int Poly::total_degree() const {
    if (terms_.empty()) return kZeroDegree;
    return terms_.begin()->first.total_degree();  // leading term has max degree
}

const std::pair<const Monomial, RingElement>& Poly::leading_term() const {
    if (terms_.empty()) fail("InvalidArgument", "leading term of the zero polynomial");
    return *terms_.begin();
}

RingElement Poly::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? spec_.zero() : it->second;
}

RingElement Poly::constant_term() const { return coefficient(Monomial::one(nvars_)); }

bool Poly::drop_constant_term() {
    auto it = terms_.find(Monomial::one(nvars_));
    if (it == terms_.end()) return false;
    terms_.erase(it);
    return true;
}

void Poly::add_term(const Monomial& m, const RingElement& c) {
    if (m.nvars() != nvars_) fail("SpecMismatch", "monomial arity mismatch");
    if (c.spec() != spec_) fail("SpecMismatch", "coefficient spec mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

namespace {
void check_poly_compat(const Poly& a, const Poly& b) {
    if (a.spec() != b.spec() || a.nvars() != b.nvars())
        fail("SpecMismatch", "polynomial operands disagree in spec or arity");
}
}  // namespace

Poly Poly::operator+(const Poly& o) const {
    check_poly_compat(*this, o);
    Poly r(*this);
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
    Poly r(spec_, nvars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    check_poly_compat(*this, o);
    Poly r(spec_, nvars_);
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
    return r;
}

Poly Poly::scaled(const RingElement& c) const {
    Poly r(spec_, nvars_);
    for (const auto& [m, x] : terms_) r.add_term(m, x * c);
    return r;
}

Poly Poly::pow(int k) const {
    if (k < 0) fail("InvalidArgument", "negative power");
    Poly acc = Poly::constant(spec_, nvars_, spec_.one());
    for (int i = 0; i < k; ++i) acc = acc * (*this);
    return acc;
}

bool Poly::operator==(const Poly& o) const {
    return spec_ == o.spec_ && nvars_ == o.nvars_ && terms_ == o.terms_;
}

Poly Poly::derivative(int var) const {
    Poly r(spec_, nvars_);
    for (const auto& [m, c] : terms_) {
        int e = m.exponent(var);
        if (e == 0) continue;
        r.add_term(m.decremented(var), c * spec_.from_int(e));
    }
    return r;
}

Poly Poly::padded(int new_nvars) const {
    if (new_nvars < nvars_) fail("InvalidArgument", "padded cannot shrink the variable set");
    Poly r(spec_, new_nvars);
    for (const auto& [m, c] : terms_) {
        std::vector<int> e = m.exponents();
        e.resize(static_cast<size_t>(new_nvars), 0);
        r.add_term(Monomial(std::move(e)), c);
    }
    return r;
}

Poly Poly::substitute(const std::vector<Poly>& images) const {
    if (static_cast<int>(images.size()) != nvars_)
        fail("SpecMismatch", "substitution image count mismatch");
    int out_vars = images.empty() ? 0 : images[0].nvars();
    for (const auto& g : images)
        if (g.spec() != spec_ || g.nvars() != out_vars)
            fail("SpecMismatch", "substitution image spec/arity mismatch");
    Poly r(spec_, out_vars);
    for (const auto& [m, c] : terms_) {
        Poly t = Poly::constant(spec_, out_vars, c);
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < m.exponent(i); ++k) t = t * images[static_cast<size_t>(i)];
        r = r + t;
    }
    return r;
}

Poly Poly::eval_var(int var, const RingElement& value) const {
    Poly r(spec_, nvars_);
    for (const auto& [m, c] : terms_) {
        int e = m.exponent(var);
        RingElement coeff = c;
        for (int k = 0; k < e; ++k) coeff *= value;
        std::vector<int> ev = m.exponents();
        ev[static_cast<size_t>(var)] = 0;
        r.add_term(Monomial(std::move(ev)), coeff);
    }
    return r;
}

RingElement Poly::eval(const std::vector<RingElement>& point) const {
    if (static_cast<int>(point.size()) != nvars_)
        fail("SpecMismatch", "evaluation point arity mismatch");
    RingElement acc = spec_.zero();
    for (const auto& [m, c] : terms_) {
        RingElement t = c;
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < m.exponent(i); ++k) t *= point[static_cast<size_t>(i)];
        acc += t;
    }
    return acc;
}

Poly Poly::map_coefficients(const RingSpec& target,
                            const std::function<RingElement(const RingElement&)>& f) const {
    Poly r(target, nvars_);
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
}

std::vector<std::string> Poly::default_names(int nvars) {
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(nvars));
    for (int i = 1; i <= nvars; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

std::string Poly::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    // Print in display order (degree, x1-major) ascending.
    std::vector<const std::pair<const Monomial, RingElement>*> order;
    order.reserve(terms_.size());
    for (const auto& t : terms_) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) {
        return Monomial::display_less(a->first, b->first);
    });
    std::ostringstream os;
    bool first = true;
    for (auto* t : order) {
        std::string c = t->second.str();
        bool neg = c.size() > 1 && c[0] == '-' && c.find(' ') == std::string::npos;
        if (first) {
            first = false;
            if (neg) {
                os << "-";
                c = c.substr(1);
            }
        } else {
            os << (neg ? " - " : " + ");
            if (neg) c = c.substr(1);
        }
        bool composite = c.find(' ') != std::string::npos || c.find('/') != std::string::npos;
        if (t->first.is_one()) {
            os << (composite ? "(" + c + ")" : c);
        } else {
            if (c != "1") os << (composite ? "(" + c + ")" : c) << "*";
            os << t->first.str(names);
        }
    }
    return os.str();
}

std::string Poly::str() const { return str(default_names(nvars_)); }

Poly base_change(const RingHom& h, const Poly& p) {
    return p.map_coefficients(h.to(), [&](const RingElement& c) { return hom_apply(h, c); });
}

}  // namespace twd
