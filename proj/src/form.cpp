#include "twderham/form.hpp"

#include <bit>
#include <sstream>

namespace twd {

namespace {

int popcount(uint64_t m) { return std::popcount(m); }

/// Sign of sorting dx_S ^ dx_T into ascending order for disjoint masks:
/// parity of the number of pairs (s in S, t in T) with s > t.
int merge_sign(uint64_t s, uint64_t t) {
    int inversions = 0;
    for (uint64_t tb = t; tb; tb &= tb - 1) {
        int ti = std::countr_zero(tb);
        uint64_t above = s >> (ti + 1);
        inversions += popcount(above);
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace

Form::Form(RingSpec spec, int nvars) : spec_(std::move(spec)), nvars_(nvars) {
    if (nvars < 0 || nvars > 62) fail("InvalidArgument", "form variable count out of range");
}

Form Form::from_poly(const Poly& p) {
    Form f(p.spec(), p.nvars());
    f.add_component(0, p);
    return f;
}

Form Form::differential(const RingSpec& spec, int nvars, int i) {
    Form f(spec, nvars);
    f.add_component(uint64_t(1) << i, Poly::constant(spec, nvars, spec.one()));
    return f;
}

Form Form::volume(const RingSpec& spec, int nvars) {
    Form f(spec, nvars);
    f.add_component((uint64_t(1) << nvars) - 1, Poly::constant(spec, nvars, spec.one()));
    return f;
}

Poly Form::component(uint64_t mask) const {
    auto it = comps_.find(mask);
    return it == comps_.end() ? Poly::zero(spec_, nvars_) : it->second;
}

bool Form::is_homogeneous(int k) const {
    for (const auto& [m, p] : comps_)
        if (popcount(m) != k) return false;
    return true;
}

std::optional<int> Form::degree() const {
    std::optional<int> deg;
    for (const auto& [m, p] : comps_) {
        int k = popcount(m);
        if (deg && *deg != k) return std::nullopt;
        deg = k;
    }
    return deg;
}

void Form::add_component(uint64_t mask, const Poly& p) {
    if (p.spec() != spec_ || p.nvars() != nvars_)
        fail("SpecMismatch", "form component spec/arity mismatch");
    if (mask >= (uint64_t(1) << nvars_)) fail("InvalidArgument", "component index out of range");
    if (p.is_zero()) return;
    auto [it, inserted] = comps_.emplace(mask, p);
    if (!inserted) {
        it->second = it->second + p;
        if (it->second.is_zero()) comps_.erase(it);
    }
}

namespace {
void check_form_compat(const Form& a, const Form& b) {
    if (a.spec() != b.spec() || a.nvars() != b.nvars())
        fail("SpecMismatch", "form operands disagree in spec or arity");
}
}  // namespace

Form Form::operator+(const Form& o) const {
    check_form_compat(*this, o);
    Form r(*this);
    for (const auto& [m, p] : o.comps_) r.add_component(m, p);
    return r;
}

Form Form::operator-(const Form& o) const { return *this + (-o); }

Form Form::operator-() const {
    Form r(spec_, nvars_);
    for (const auto& [m, p] : comps_) r.comps_.emplace(m, -p);
    return r;
}

Form Form::scaled(const Poly& p) const {
    Form r(spec_, nvars_);
    for (const auto& [m, q] : comps_) r.add_component(m, q * p);
    return r;
}

Form Form::scaled(const RingElement& c) const {
    Form r(spec_, nvars_);
    for (const auto& [m, q] : comps_) r.add_component(m, q.scaled(c));
    return r;
}

bool Form::operator==(const Form& o) const {
    return spec_ == o.spec_ && nvars_ == o.nvars_ && comps_ == o.comps_;
}

Form wedge(const Form& a, const Form& b) {
    if (a.spec() != b.spec() || a.nvars() != b.nvars())
        fail("SpecMismatch", "wedge operands disagree in spec or arity");
    Form r(a.spec(), a.nvars());
    for (const auto& [ma, pa] : a.components()) {
        for (const auto& [mb, pb] : b.components()) {
            if (ma & mb) continue;  // repeated differential
            int sign = merge_sign(ma, mb);
            Poly prod = pa * pb;
            r.add_component(ma | mb, sign > 0 ? prod : -prod);
        }
    }
    return r;
}

Form de_rham_d(const Form& omega, int active_vars) {
    int limit = active_vars < 0 ? omega.nvars() : active_vars;
    Form r(omega.spec(), omega.nvars());
    for (const auto& [mask, p] : omega.components()) {
        for (int i = 0; i < limit; ++i) {
            uint64_t bit = uint64_t(1) << i;
            if (mask & bit) continue;
            Poly dp = p.derivative(i);
            if (dp.is_zero()) continue;
            // dx_i ^ dx_S: move dx_i past the members of S below i.
            int sign = merge_sign(bit, mask);
            r.add_component(mask | bit, sign > 0 ? dp : -dp);
        }
    }
    return r;
}

Form Form::contract(const std::vector<Poly>& eta) const {
    if (static_cast<int>(eta.size()) != nvars_)
        fail("SpecMismatch", "vector field arity mismatch");
    Form r(spec_, nvars_);
    for (const auto& [mask, p] : comps_) {
        int pos = 0;  // 0-based position of the bit inside the sorted subset
        for (uint64_t mb = mask; mb; mb &= mb - 1, ++pos) {
            int i = std::countr_zero(mb);
            const Poly& comp = eta[static_cast<size_t>(i)];
            if (comp.is_zero()) continue;
            Poly term = p * comp;
            if (pos % 2) term = -term;
            r.add_component(mask & ~(uint64_t(1) << i), term);
        }
    }
    return r;
}

Form Form::lie_derivative(const std::vector<Poly>& eta, int active_vars) const {
    if (static_cast<int>(eta.size()) != nvars_)
        fail("SpecMismatch", "vector field arity mismatch");
    int limit = active_vars < 0 ? nvars_ : active_vars;
    Form r(spec_, nvars_);
    for (const auto& [mask, p] : comps_) {
        // Function part: eta(p) dx_S.
        Poly directional(spec_, nvars_);
        for (int a = 0; a < nvars_; ++a) {
            if (eta[static_cast<size_t>(a)].is_zero()) continue;
            directional = directional + eta[static_cast<size_t>(a)] * p.derivative(a);
        }
        r.add_component(mask, directional);
        // Basis part: replace dx_{s_j} by d(eta_{s_j}) one slot at a time.
        for (uint64_t mb = mask; mb; mb &= mb - 1) {
            int i = std::countr_zero(mb);
            Form d_eta_i =
                de_rham_d(Form::from_poly(eta[static_cast<size_t>(i)]), limit);
            if (d_eta_i.is_zero()) continue;
            Form prefix(spec_, nvars_);
            prefix.add_component(mask & ((uint64_t(1) << i) - 1),
                                 Poly::constant(spec_, nvars_, spec_.one()));
            Form suffix(spec_, nvars_);
            suffix.add_component(mask & ~((uint64_t(1) << (i + 1)) - 1),
                                 Poly::constant(spec_, nvars_, spec_.one()));
            Form term = wedge(wedge(prefix, d_eta_i), suffix).scaled(p);
            r = r + term;
        }
    }
    return r;
}

Form Form::padded(int new_nvars) const {
    Form r(spec_, new_nvars);
    for (const auto& [m, p] : comps_) r.add_component(m, p.padded(new_nvars));
    return r;
}

Form Form::map_coefficients(const RingSpec& target,
                            const std::function<RingElement(const RingElement&)>& f) const {
    Form r(target, nvars_);
    for (const auto& [m, p] : comps_) r.add_component(m, p.map_coefficients(target, f));
    return r;
}

std::string Form::str(const std::vector<std::string>& var_names) const {
    if (comps_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mask, p] : comps_) {
        if (!first) os << " + ";
        first = false;
        if (mask == 0) {
            os << p.str(var_names);
            continue;
        }
        std::string c = p.str(var_names);
        if (c != "1") os << "(" << c << ")*";
        bool firstd = true;
        for (uint64_t mb = mask; mb; mb &= mb - 1) {
            int i = std::countr_zero(mb);
            if (!firstd) os << "^";
            firstd = false;
            os << "d" << var_names[static_cast<size_t>(i)];
        }
    }
    return os.str();
}

std::string Form::str() const { return str(Poly::default_names(nvars_)); }

TwistedComplex::TwistedComplex(const Poly& f, int active_vars)
    : f_(f),
      df_(de_rham_d(Form::from_poly(f), active_vars)),
      active_(active_vars < 0 ? f.nvars() : active_vars) {}

TwistedComplex::TwistedComplex(const Form& df, int active_vars)
    : df_(df), active_(active_vars < 0 ? df.nvars() : active_vars) {
    if (!df.is_zero() && !df.is_homogeneous(1))
        fail("NotClosed", "twist data must be a one-form");
    if (!de_rham_d(df, active_).is_zero())
        fail("NotClosed", "the given one-form is not closed");
}

Form twisted_d(const TwistedComplex& complex, const Form& omega) {
    if (omega.spec() != complex.spec() || omega.nvars() != complex.nvars())
        fail("SpecMismatch", "form does not live on the twisted complex");
    return de_rham_d(omega, complex.active_vars()) + wedge(complex.df(), omega);
}

Form pullback(const std::vector<Poly>& phi, const Form& omega) {
    if (static_cast<int>(phi.size()) != omega.nvars())
        fail("SpecMismatch", "pullback component count must match form arity");
    int out_vars = phi.empty() ? 0 : phi[0].nvars();
    for (const auto& p : phi)
        if (p.spec() != omega.spec() || p.nvars() != out_vars)
            fail("SpecMismatch", "pullback component spec/arity mismatch");
    Form r(omega.spec(), out_vars);
    for (const auto& [mask, p] : omega.components()) {
        Form term = Form::from_poly(p.substitute(phi));
        for (uint64_t mb = mask; mb; mb &= mb - 1) {
            int i = std::countr_zero(mb);
            term = wedge(term, de_rham_d(Form::from_poly(phi[static_cast<size_t>(i)])));
        }
        r = r + term;
    }
    return r;
}

Form base_change(const RingHom& h, const Form& omega) {
    return omega.map_coefficients(h.to(), [&](const RingElement& c) { return hom_apply(h, c); });
}

}  // namespace twd
