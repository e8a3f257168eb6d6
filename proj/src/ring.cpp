#include "twderham/ring.hpp"

#include <algorithm>
#include <sstream>

namespace twd {

// ---------------------------------------------------------------------------
// UniPolyQ

UniPolyQ::UniPolyQ(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {
    for (auto& c : c_) c.canonicalize();
    trim();
}

UniPolyQ UniPolyQ::constant(const mpq_class& c) {
    if (c == 0) return UniPolyQ();
    return UniPolyQ({c});
}

UniPolyQ UniPolyQ::variable() { return UniPolyQ({mpq_class(0), mpq_class(1)}); }

void UniPolyQ::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const mpq_class& UniPolyQ::coeff(int i) const {
    static const mpq_class zero(0);
    if (i < 0 || i >= static_cast<int>(c_.size())) return zero;
    return c_[static_cast<size_t>(i)];
}

UniPolyQ UniPolyQ::operator+(const UniPolyQ& o) const {
    std::vector<mpq_class> r(std::max(c_.size(), o.c_.size()), mpq_class(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return UniPolyQ(std::move(r));
}

UniPolyQ UniPolyQ::operator-(const UniPolyQ& o) const { return *this + (-o); }

UniPolyQ UniPolyQ::operator-() const {
    std::vector<mpq_class> r(c_);
    for (auto& x : r) x = -x;
    return UniPolyQ(std::move(r));
}

UniPolyQ UniPolyQ::operator*(const UniPolyQ& o) const {
    if (is_zero() || o.is_zero()) return UniPolyQ();
    std::vector<mpq_class> r(c_.size() + o.c_.size() - 1, mpq_class(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return UniPolyQ(std::move(r));
}

UniPolyQ UniPolyQ::scaled(const mpq_class& s) const {
    if (s == 0) return UniPolyQ();
    std::vector<mpq_class> r(c_);
    for (auto& x : r) x *= s;
    return UniPolyQ(std::move(r));
}

UniPolyQ UniPolyQ::derivative() const {
    if (c_.size() <= 1) return UniPolyQ();
    std::vector<mpq_class> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * mpq_class(static_cast<long>(i));
    return UniPolyQ(std::move(r));
}

mpq_class UniPolyQ::eval(const mpq_class& x) const {
    mpq_class acc(0);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

void UniPolyQ::divmod(const UniPolyQ& a, const UniPolyQ& b, UniPolyQ& q, UniPolyQ& r) {
    if (b.is_zero()) fail("DivisionByZero", "polynomial division by zero");
    std::vector<mpq_class> rem(a.c_);
    std::vector<mpq_class> quo;
    int db = b.degree();
    if (static_cast<int>(rem.size()) - 1 >= db)
        quo.assign(rem.size() - static_cast<size_t>(db), mpq_class(0));
    const mpq_class& lead = b.c_.back();
    while (static_cast<int>(rem.size()) - 1 >= db) {
        while (!rem.empty() && rem.back() == 0) rem.pop_back();
        if (static_cast<int>(rem.size()) - 1 < db) break;
        size_t shift = rem.size() - 1 - static_cast<size_t>(db);
        mpq_class f = rem.back() / lead;
        quo[shift] = f;
        for (int i = 0; i <= db; ++i) rem[shift + static_cast<size_t>(i)] -= f * b.c_[static_cast<size_t>(i)];
        rem.pop_back();
    }
    q = UniPolyQ(std::move(quo));
    r = UniPolyQ(std::move(rem));
}

UniPolyQ UniPolyQ::gcd(UniPolyQ a, UniPolyQ b) {
    while (!b.is_zero()) {
        UniPolyQ q, r;
        divmod(a, b, q, r);
        a = b;
        b = r;
    }
    if (a.is_zero()) return a;
    return a.monic();
}

UniPolyQ UniPolyQ::monic() const {
    if (is_zero()) return *this;
    return scaled(1 / c_.back());
}

mpq_class UniPolyQ::content_inverse() const {
    if (is_zero()) return mpq_class(1);
    mpz_class num_gcd(0), den_lcm(1);
    for (const auto& c : c_) {
        mpz_class n = abs(c.get_num());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    mpq_class s(den_lcm, num_gcd);
    s.canonicalize();
    return s;
}

std::string UniPolyQ::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        const mpq_class& c = c_[i];
        if (c == 0) continue;
        mpq_class a = abs(c);
        bool neg = c < 0;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        if (i == 0) {
            os << a.get_str();
        } else {
            if (a != 1) os << a.get_str() << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// RingSpec

struct RingSpec::Rep {
    Kind kind = Kind::Integers;
    mpz_class modulus;                 // Modular
    std::shared_ptr<const Rep> base;   // Series
    std::string var;                   // Series / RationalFunctions
    int order = 0;                     // Series N
    int prime = 0, precision = 0;      // PiAdic
    int cutoff = 0;                    // PiAdic D annotation
    mpz_class prime_power;             // p^N, cached
};

namespace {

bool is_small_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

bool rep_equal(const RingSpec::Rep& a, const RingSpec::Rep& b);

}  // namespace

RingSpec RingSpec::integers() {
    static const auto rep = std::make_shared<const Rep>();
    return RingSpec(rep);
}

RingSpec RingSpec::rationals() {
    static const auto rep = [] {
        auto r = std::make_shared<Rep>();
        r->kind = Kind::Rationals;
        return std::shared_ptr<const Rep>(r);
    }();
    return RingSpec(rep);
}

RingSpec RingSpec::modular(mpz_class modulus) {
    if (modulus < 2) fail("InvalidRingSpec", "Modular modulus must be >= 2");
    auto r = std::make_shared<Rep>();
    r->kind = Kind::Modular;
    r->modulus = std::move(modulus);
    return RingSpec(r);
}

RingSpec RingSpec::series(const RingSpec& base, std::string var, int order) {
    if (order < 1) fail("InvalidRingSpec", "TruncatedSeries order must be >= 1");
    if (base.kind() == Kind::Series)
        fail("InvalidRingSpec", "TruncatedSeries over TruncatedSeries is rejected");
    auto r = std::make_shared<Rep>();
    r->kind = Kind::Series;
    r->base = base.rep_;
    r->var = std::move(var);
    r->order = order;
    return RingSpec(r);
}

RingSpec RingSpec::pi_adic(int prime, int precision, int default_cutoff) {
    if (prime < 3 || prime % 2 == 0 || !is_small_prime(prime))
        fail("InvalidRingSpec", "PiAdic prime must be an odd prime");
    if (precision < 1) fail("InvalidRingSpec", "PiAdic precision must be >= 1");
    auto r = std::make_shared<Rep>();
    r->kind = Kind::PiAdic;
    r->prime = prime;
    r->precision = precision;
    r->cutoff = default_cutoff;
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(prime),
                  static_cast<unsigned long>(precision));
    r->prime_power = pw;
    return RingSpec(r);
}

RingSpec RingSpec::rational_functions(std::string var) {
    auto r = std::make_shared<Rep>();
    r->kind = Kind::RationalFunctions;
    r->var = std::move(var);
    return RingSpec(r);
}

RingSpec::Kind RingSpec::kind() const { return rep_->kind; }

bool RingSpec::is_field() const {
    return rep_->kind == Kind::Rationals || rep_->kind == Kind::RationalFunctions;
}

bool RingSpec::has_torsion() const {
    switch (rep_->kind) {
        case Kind::Modular:
        case Kind::PiAdic: return true;
        case Kind::Series: return RingSpec(rep_->base).has_torsion();
        default: return false;
    }
}

const mpz_class& RingSpec::modulus() const {
    if (rep_->kind != Kind::Modular) fail("SpecMismatch", "not a Modular ring");
    return rep_->modulus;
}

RingSpec RingSpec::base() const {
    if (rep_->kind != Kind::Series) fail("SpecMismatch", "not a TruncatedSeries ring");
    return RingSpec(rep_->base);
}

const std::string& RingSpec::variable() const { return rep_->var; }
int RingSpec::order() const { return rep_->order; }
int RingSpec::prime() const { return rep_->prime; }
int RingSpec::precision() const { return rep_->precision; }
int RingSpec::default_cutoff() const { return rep_->cutoff; }

const mpz_class& RingSpec::pi_adic_modulus() const {
    if (rep_->kind != Kind::PiAdic) fail("SpecMismatch", "not a PiAdic ring");
    return rep_->prime_power;
}

namespace {
bool rep_equal(const RingSpec::Rep& a, const RingSpec::Rep& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case RingSpec::Kind::Integers:
        case RingSpec::Kind::Rationals: return true;
        case RingSpec::Kind::Modular: return a.modulus == b.modulus;
        case RingSpec::Kind::Series:
            return a.var == b.var && a.order == b.order && rep_equal(*a.base, *b.base);
        case RingSpec::Kind::PiAdic:
            // The D annotation is not structural.
            return a.prime == b.prime && a.precision == b.precision;
        case RingSpec::Kind::RationalFunctions: return a.var == b.var;
    }
    return false;
}
}  // namespace

bool RingSpec::operator==(const RingSpec& o) const {
    return rep_ == o.rep_ || rep_equal(*rep_, *o.rep_);
}

std::string RingSpec::str() const {
    switch (rep_->kind) {
        case Kind::Integers: return "ZZ";
        case Kind::Rationals: return "QQ";
        case Kind::Modular: return "Zmod:" + rep_->modulus.get_str();
        case Kind::Series:
            return "series:" + RingSpec(rep_->base).str() + ":" + rep_->var + ":" +
                   std::to_string(rep_->order);
        case Kind::PiAdic: {
            std::string s = "padic:p=" + std::to_string(rep_->prime) +
                            ":N=" + std::to_string(rep_->precision);
            if (rep_->cutoff > 0) s += ":D=" + std::to_string(rep_->cutoff);
            return s;
        }
        case Kind::RationalFunctions: return "ratfun:" + rep_->var;
    }
    return "?";
}

namespace {

RingSpec parse_spec_tokens(const std::vector<std::string>& tok, size_t& pos) {
    auto need = [&](const char* what) -> const std::string& {
        if (pos >= tok.size()) fail("ParseError", std::string("ring spec: expected ") + what);
        return tok[pos++];
    };
    const std::string& head = need("ring kind");
    if (head == "ZZ") return RingSpec::integers();
    if (head == "QQ") return RingSpec::rationals();
    if (head == "Zmod") {
        const std::string& m = need("modulus after Zmod");
        return RingSpec::modular(mpz_class(m));
    }
    if (head == "series") {
        RingSpec base = parse_spec_tokens(tok, pos);
        const std::string& var = need("series variable name");
        const std::string& n = need("series order");
        return RingSpec::series(base, var, std::stoi(n));
    }
    if (head == "padic") {
        int p = 0, n = 0, d = 0;
        while (pos < tok.size()) {
            const std::string& t = tok[pos];
            auto eq = t.find('=');
            if (eq == std::string::npos || eq == 0) break;
            std::string key = t.substr(0, eq);
            int val = std::stoi(t.substr(eq + 1));
            if (key == "p") p = val;
            else if (key == "N") n = val;
            else if (key == "D") d = val;
            else fail("ParseError", "ring spec: unknown padic field '" + key + "'");
            ++pos;
        }
        if (p == 0 || n == 0) fail("ParseError", "ring spec: padic requires p= and N=");
        return RingSpec::pi_adic(p, n, d);
    }
    fail("ParseError", "ring spec: unknown kind '" + head + "'");
}

}  // namespace

RingSpec RingSpec::parse(const std::string& text) {
    std::vector<std::string> tok;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            tok.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    tok.push_back(cur);
    size_t pos = 0;
    RingSpec spec = parse_spec_tokens(tok, pos);
    if (pos != tok.size()) fail("ParseError", "ring spec: trailing tokens in '" + text + "'");
    return spec;
}

RingElement RingSpec::zero() const { return from_int(0); }
RingElement RingSpec::one() const { return from_int(1); }

RingElement RingSpec::from_int(long v) const { return from_mpz(mpz_class(v)); }

RingElement RingSpec::from_mpz(const mpz_class& v) const {
    switch (rep_->kind) {
        case Kind::Integers:
        case Kind::Modular: return RingElement(*this, v);
        case Kind::Rationals: return RingElement(*this, mpq_class(v));
        case Kind::Series: {
            std::vector<RingElement> c(static_cast<size_t>(rep_->order), base().zero());
            c[0] = base().from_mpz(v);
            return RingElement(*this, std::move(c));
        }
        case Kind::PiAdic: {
            RingElement::PiAdicPayload p;
            p.c.assign(static_cast<size_t>(rep_->prime - 1), mpz_class(0));
            p.c[0] = v;
            return RingElement(*this, std::move(p));
        }
        case Kind::RationalFunctions: {
            RingElement::RatFunPayload p;
            p.num = UniPolyQ::constant(mpq_class(v));
            p.den = UniPolyQ::constant(1);
            return RingElement(*this, std::move(p));
        }
    }
    fail("InvalidRingSpec", "unknown kind");
}

RingElement RingSpec::from_mpq(const mpq_class& v) const {
    mpq_class q(v);
    q.canonicalize();
    switch (rep_->kind) {
        case Kind::Rationals: return RingElement(*this, q);
        case Kind::RationalFunctions: {
            RingElement::RatFunPayload p;
            p.num = UniPolyQ::constant(q);
            p.den = UniPolyQ::constant(1);
            return RingElement(*this, std::move(p));
        }
        default: {
            if (q.get_den() == 1) return from_mpz(q.get_num());
            RingElement den = from_mpz(q.get_den());
            if (!den.is_unit())
                fail("DenominatorNotInvertible",
                     "denominator " + q.get_den().get_str() + " is not a unit in " + str());
            return from_mpz(q.get_num()) * den.inverse();
        }
    }
}

// ---------------------------------------------------------------------------
// RingElement

RingElement::RingElement(RingSpec spec, Payload payload)
    : spec_(std::move(spec)), v_(std::move(payload)) {
    canonicalize();
}

namespace {
mpz_class mod_reduce(const mpz_class& v, const mpz_class& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return r;
}
}  // namespace

void RingElement::canonicalize() {
    switch (spec_.kind()) {
        case RingSpec::Kind::Integers: break;
        case RingSpec::Kind::Rationals: std::get<mpq_class>(v_).canonicalize(); break;
        case RingSpec::Kind::Modular: {
            auto& z = std::get<mpz_class>(v_);
            z = mod_reduce(z, spec_.modulus());
            break;
        }
        case RingSpec::Kind::Series: {
            auto& c = std::get<std::vector<RingElement>>(v_);
            size_t n = static_cast<size_t>(spec_.order());
            if (c.size() > n) c.resize(n);
            while (c.size() < n) c.push_back(spec_.base().zero());
            for (auto& x : c)
                if (x.spec() != spec_.base()) fail("SpecMismatch", "series coefficient spec");
            break;
        }
        case RingSpec::Kind::PiAdic: {
            auto& p = std::get<PiAdicPayload>(v_);
            size_t n = static_cast<size_t>(spec_.prime() - 1);
            if (p.c.size() > n) fail("SpecMismatch", "pi-adic payload too long");
            while (p.c.size() < n) p.c.emplace_back(0);
            for (auto& z : p.c) z = mod_reduce(z, spec_.pi_adic_modulus());
            break;
        }
        case RingSpec::Kind::RationalFunctions: {
            auto& f = std::get<RatFunPayload>(v_);
            if (f.den.is_zero()) fail("DivisionByZero", "rational function with zero denominator");
            if (f.num.is_zero()) {
                f.den = UniPolyQ::constant(1);
                break;
            }
            UniPolyQ g = UniPolyQ::gcd(f.num, f.den);
            if (g.degree() > 0) {
                UniPolyQ q, r;
                UniPolyQ::divmod(f.num, g, q, r);
                f.num = q;
                UniPolyQ::divmod(f.den, g, q, r);
                f.den = q;
            }
            mpq_class lead = f.den.coeff(f.den.degree());
            if (lead != 1) {
                f.num = f.num.scaled(1 / lead);
                f.den = f.den.scaled(1 / lead);
            }
            break;
        }
    }
}

bool RingElement::is_zero() const {
    switch (spec_.kind()) {
        case RingSpec::Kind::Integers:
        case RingSpec::Kind::Modular: return std::get<mpz_class>(v_) == 0;
        case RingSpec::Kind::Rationals: return std::get<mpq_class>(v_) == 0;
        case RingSpec::Kind::Series: {
            for (const auto& c : std::get<std::vector<RingElement>>(v_))
                if (!c.is_zero()) return false;
            return true;
        }
        case RingSpec::Kind::PiAdic: {
            for (const auto& z : std::get<PiAdicPayload>(v_).c)
                if (z != 0) return false;
            return true;
        }
        case RingSpec::Kind::RationalFunctions: return std::get<RatFunPayload>(v_).num.is_zero();
    }
    return false;
}

bool RingElement::is_one() const { return *this == spec_.one(); }

bool RingElement::is_unit() const {
    switch (spec_.kind()) {
        case RingSpec::Kind::Integers: {
            const auto& z = std::get<mpz_class>(v_);
            return z == 1 || z == -1;
        }
        case RingSpec::Kind::Rationals: return std::get<mpq_class>(v_) != 0;
        case RingSpec::Kind::Modular: {
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), std::get<mpz_class>(v_).get_mpz_t(),
                    spec_.modulus().get_mpz_t());
            return g == 1;
        }
        case RingSpec::Kind::Series:
            return std::get<std::vector<RingElement>>(v_)[0].is_unit();
        case RingSpec::Kind::PiAdic: {
            mpz_class r = mod_reduce(std::get<PiAdicPayload>(v_).c[0], mpz_class(spec_.prime()));
            return r != 0;
        }
        case RingSpec::Kind::RationalFunctions:
            return !std::get<RatFunPayload>(v_).num.is_zero();
    }
    return false;
}

namespace {
void check_specs(const RingElement& a, const RingElement& b) {
    if (a.spec() != b.spec())
        fail("SpecMismatch", "operands live in " + a.spec().str() + " and " + b.spec().str());
}
}  // namespace

RingElement RingElement::operator+(const RingElement& o) const {
    check_specs(*this, o);
    switch (spec_.kind()) {
        case RingSpec::Kind::Integers:
        case RingSpec::Kind::Modular:
            return RingElement(spec_, mpz_class(std::get<mpz_class>(v_) + std::get<mpz_class>(o.v_)));
        case RingSpec::Kind::Rationals:
            return RingElement(spec_, mpq_class(std::get<mpq_class>(v_) + std::get<mpq_class>(o.v_)));
        case RingSpec::Kind::Series: {
            auto c = std::get<std::vector<RingElement>>(v_);
            const auto& d = std::get<std::vector<RingElement>>(o.v_);
            for (size_t i = 0; i < c.size(); ++i) c[i] += d[i];
            return RingElement(spec_, std::move(c));
        }
        case RingSpec::Kind::PiAdic: {
            auto p = std::get<PiAdicPayload>(v_);
            const auto& q = std::get<PiAdicPayload>(o.v_);
            for (size_t i = 0; i < p.c.size(); ++i) p.c[i] += q.c[i];
            return RingElement(spec_, std::move(p));
        }
        case RingSpec::Kind::RationalFunctions: {
            const auto& a = std::get<RatFunPayload>(v_);
            const auto& b = std::get<RatFunPayload>(o.v_);
            RatFunPayload r;
            r.num = a.num * b.den + b.num * a.den;
            r.den = a.den * b.den;
            return RingElement(spec_, std::move(r));
        }
    }
    fail("InvalidRingSpec", "unknown kind");
}

RingElement RingElement::operator-() const {
    switch (spec_.kind()) {
        case RingSpec::Kind::Integers:
        case RingSpec::Kind::Modular: return RingElement(spec_, mpz_class(-std::get<mpz_class>(v_)));
        case RingSpec::Kind::Rationals: return RingElement(spec_, mpq_class(-std::get<mpq_class>(v_)));
        case RingSpec::Kind::Series: {
            auto c = std::get<std::vector<RingElement>>(v_);
            for (auto& x : c) x = -x;
            return RingElement(spec_, std::move(c));
        }
        case RingSpec::Kind::PiAdic: {
            auto p = std::get<PiAdicPayload>(v_);
            for (auto& z : p.c) z = -z;
            return RingElement(spec_, std::move(p));
        }
        case RingSpec::Kind::RationalFunctions: {
            auto f = std::get<RatFunPayload>(v_);
            f.num = -f.num;
            return RingElement(spec_, std::move(f));
        }
    }
    fail("InvalidRingSpec", "unknown kind");
}

RingElement RingElement::operator-(const RingElement& o) const { return *this + (-o); }

RingElement RingElement::operator*(const RingElement& o) const {
    check_specs(*this, o);
    switch (spec_.kind()) {
        case RingSpec::Kind::Integers:
        case RingSpec::Kind::Modular:
            return RingElement(spec_, mpz_class(std::get<mpz_class>(v_) * std::get<mpz_class>(o.v_)));
        case RingSpec::Kind::Rationals:
            return RingElement(spec_, mpq_class(std::get<mpq_class>(v_) * std::get<mpq_class>(o.v_)));
        case RingSpec::Kind::Series: {
            const auto& a = std::get<std::vector<RingElement>>(v_);
            const auto& b = std::get<std::vector<RingElement>>(o.v_);
            std::vector<RingElement> c(a.size(), spec_.base().zero());
            for (size_t i = 0; i < a.size(); ++i) {
                if (a[i].is_zero()) continue;
                for (size_t j = 0; i + j < a.size(); ++j) {
                    if (b[j].is_zero()) continue;
                    c[i + j] += a[i] * b[j];
                }
            }
            return RingElement(spec_, std::move(c));
        }
        case RingSpec::Kind::PiAdic: {
            const auto& a = std::get<PiAdicPayload>(v_).c;
            const auto& b = std::get<PiAdicPayload>(o.v_).c;
            size_t n = a.size();  // p - 1
            std::vector<mpz_class> conv(2 * n - 1, mpz_class(0));
            for (size_t i = 0; i < n; ++i) {
                if (a[i] == 0) continue;
                for (size_t j = 0; j < n; ++j) {
                    if (b[j] == 0) continue;
                    conv[i + j] += a[i] * b[j];
                }
            }
            // pi^{p-1} = -p
            PiAdicPayload r;
            r.c.assign(n, mpz_class(0));
            mpz_class p(spec_.prime());
            for (size_t k = conv.size(); k-- > 0;) {
                if (k >= n)
                    conv[k - n] -= p * conv[k];
                else
                    r.c[k] = conv[k];
            }
            return RingElement(spec_, std::move(r));
        }
        case RingSpec::Kind::RationalFunctions: {
            const auto& a = std::get<RatFunPayload>(v_);
            const auto& b = std::get<RatFunPayload>(o.v_);
            RatFunPayload r;
            r.num = a.num * b.num;
            r.den = a.den * b.den;
            return RingElement(spec_, std::move(r));
        }
    }
    fail("InvalidRingSpec", "unknown kind");
}

bool RingElement::operator==(const RingElement& o) const {
    if (spec_ != o.spec_) return false;
    return v_ == o.v_;
}

RingElement RingElement::inverse() const {
    switch (spec_.kind()) {
        case RingSpec::Kind::Integers: {
            const auto& z = std::get<mpz_class>(v_);
            if (z == 1 || z == -1) return *this;
            fail("NotAUnit", z.get_str() + " is not a unit in ZZ");
        }
        case RingSpec::Kind::Rationals: {
            const auto& q = std::get<mpq_class>(v_);
            if (q == 0) fail("NotAUnit", "0 is not a unit");
            return RingElement(spec_, mpq_class(mpq_class(1) / q));
        }
        case RingSpec::Kind::Modular: {
            mpz_class inv;
            if (!mpz_invert(inv.get_mpz_t(), std::get<mpz_class>(v_).get_mpz_t(),
                            spec_.modulus().get_mpz_t()))
                fail("NotAUnit", str() + " is not a unit mod " + spec_.modulus().get_str());
            return RingElement(spec_, std::move(inv));
        }
        case RingSpec::Kind::Series: {
            // Invertible iff the constant term is; standard series recursion.
            const auto& a = std::get<std::vector<RingElement>>(v_);
            if (!a[0].is_unit())
                fail("NotAUnit", "series constant term is not a unit in the base ring");
            RingElement a0inv = a[0].inverse();
            std::vector<RingElement> b(a.size(), spec_.base().zero());
            b[0] = a0inv;
            for (size_t k = 1; k < a.size(); ++k) {
                RingElement acc = spec_.base().zero();
                for (size_t j = 1; j <= k; ++j) acc += a[j] * b[k - j];
                b[k] = -(a0inv * acc);
            }
            return RingElement(spec_, std::move(b));
        }
        case RingSpec::Kind::PiAdic: {
            if (!is_unit()) fail("NotAUnit", str() + " is not a unit (constant term divisible by p)");
            // Hensel: x <- x(2 - ux), starting from the residue-field inverse.
            mpz_class p(spec_.prime());
            mpz_class inv0;
            mpz_class c0 = mod_reduce(std::get<PiAdicPayload>(v_).c[0], p);
            mpz_invert(inv0.get_mpz_t(), c0.get_mpz_t(), p.get_mpz_t());
            RingElement x = spec_.from_mpz(inv0);
            RingElement two = spec_.from_int(2);
            for (int it = 0; it < 64; ++it) {
                RingElement e = two - (*this) * x;
                x = x * e;
                if (((*this) * x).is_one()) return x;
            }
            fail("NotAUnit", "pi-adic inversion did not converge");
        }
        case RingSpec::Kind::RationalFunctions: {
            const auto& f = std::get<RatFunPayload>(v_);
            if (f.num.is_zero()) fail("NotAUnit", "0 is not a unit");
            RatFunPayload r;
            r.num = f.den;
            r.den = f.num;
            return RingElement(spec_, std::move(r));
        }
    }
    fail("InvalidRingSpec", "unknown kind");
}

const mpz_class& RingElement::integer_value() const {
    if (spec_.kind() != RingSpec::Kind::Integers && spec_.kind() != RingSpec::Kind::Modular)
        fail("SpecMismatch", "integer_value on " + spec_.str());
    return std::get<mpz_class>(v_);
}

const mpq_class& RingElement::rational_value() const {
    if (spec_.kind() != RingSpec::Kind::Rationals)
        fail("SpecMismatch", "rational_value on " + spec_.str());
    return std::get<mpq_class>(v_);
}

const std::vector<RingElement>& RingElement::series_coeffs() const {
    if (spec_.kind() != RingSpec::Kind::Series)
        fail("SpecMismatch", "series_coeffs on " + spec_.str());
    return std::get<std::vector<RingElement>>(v_);
}

const RingElement::PiAdicPayload& RingElement::pi_adic() const {
    if (spec_.kind() != RingSpec::Kind::PiAdic) fail("SpecMismatch", "pi_adic on " + spec_.str());
    return std::get<PiAdicPayload>(v_);
}

const RingElement::RatFunPayload& RingElement::rat_fun() const {
    if (spec_.kind() != RingSpec::Kind::RationalFunctions)
        fail("SpecMismatch", "rat_fun on " + spec_.str());
    return std::get<RatFunPayload>(v_);
}

RingElement RingElement::derivative() const {
    if (spec_.kind() != RingSpec::Kind::RationalFunctions)
        fail("SpecMismatch", "derivative requires rational-function coefficients");
    const auto& f = std::get<RatFunPayload>(v_);
    RatFunPayload r;
    r.num = f.num.derivative() * f.den - f.num * f.den.derivative();
    r.den = f.den * f.den;
    return RingElement(spec_, std::move(r));
}

std::string RingElement::str() const {
    switch (spec_.kind()) {
        case RingSpec::Kind::Integers:
        case RingSpec::Kind::Modular: return std::get<mpz_class>(v_).get_str();
        case RingSpec::Kind::Rationals: return std::get<mpq_class>(v_).get_str();
        case RingSpec::Kind::Series:
        case RingSpec::Kind::PiAdic: {
            const std::string var =
                spec_.kind() == RingSpec::Kind::Series ? spec_.variable() : "pi";
            std::vector<std::string> coeffs;
            if (spec_.kind() == RingSpec::Kind::Series)
                for (const auto& c : std::get<std::vector<RingElement>>(v_))
                    coeffs.push_back(c.is_zero() ? "" : c.str());
            else
                for (const auto& z : std::get<PiAdicPayload>(v_).c)
                    coeffs.push_back(z == 0 ? "" : z.get_str());
            std::ostringstream os;
            bool first = true;
            for (size_t i = 0; i < coeffs.size(); ++i) {
                if (coeffs[i].empty()) continue;
                if (!first) os << " + ";
                first = false;
                bool needs_parens = coeffs[i].find(' ') != std::string::npos ||
                                    (i > 0 && coeffs[i].find('/') != std::string::npos);
                if (i == 0) {
                    os << coeffs[i];
                } else {
                    if (coeffs[i] != "1") {
                        os << (needs_parens ? "(" + coeffs[i] + ")" : coeffs[i]) << "*";
                    }
                    os << var;
                    if (i > 1) os << "^" << i;
                }
            }
            return first ? "0" : os.str();
        }
        case RingSpec::Kind::RationalFunctions: {
            const auto& f = std::get<RatFunPayload>(v_);
            const std::string& var = spec_.variable();
            if (f.den.degree() == 0 && f.den.coeff(0) == 1) return f.num.str(var);
            std::string num = f.num.str(var);
            if (f.num.degree() > 0) num = "(" + num + ")";
            return num + "/(" + f.den.str(var) + ")";
        }
    }
    return "?";
}

RingElement ring_add(const RingElement& a, const RingElement& b) { return a + b; }
RingElement ring_mul(const RingElement& a, const RingElement& b) { return a * b; }
RingElement ring_neg(const RingElement& a) { return -a; }
RingElement ring_inverse(const RingElement& a) { return a.inverse(); }

// ---------------------------------------------------------------------------
// RingHom

namespace {

bool base_hom_supported(const RingSpec& from, const RingSpec& to) {
    if (from == to) return true;
    using K = RingSpec::Kind;
    switch (from.kind()) {
        case K::Integers:
            return to.kind() == K::Rationals || to.kind() == K::Modular ||
                   to.kind() == K::PiAdic;
        case K::Rationals: return to.kind() == K::Modular || to.kind() == K::PiAdic;
        default: return false;
    }
}

}  // namespace

RingHom::RingHom(RingSpec from, RingSpec to) : from_(std::move(from)), to_(std::move(to)) {
    if (from_ == to_) return;
    if (from_.kind() == RingSpec::Kind::Series && to_.kind() == RingSpec::Kind::Series &&
        from_.variable() == to_.variable() && from_.order() == to_.order() &&
        base_hom_supported(from_.base(), to_.base()))
        return;
    // Constant embedding of the base into its truncated-series ring.
    if (to_.kind() == RingSpec::Kind::Series && to_.base() == from_) return;
    if (base_hom_supported(from_, to_)) return;
    fail("UnsupportedHomomorphism", "no supported map " + from_.str() + " -> " + to_.str());
}

RingElement hom_apply(const RingHom& h, const RingElement& a) {
    if (a.spec() != h.from()) fail("SpecMismatch", "element not in the homomorphism domain");
    const RingSpec& to = h.to();
    if (a.spec() == to) return a;
    using K = RingSpec::Kind;
    if (to.kind() == K::Series && to.base() == a.spec()) {
        std::vector<RingElement> c(static_cast<size_t>(to.order()), a.spec().zero());
        c[0] = a;
        return RingElement(to, std::move(c));
    }
    switch (a.spec().kind()) {
        case K::Integers: return to.from_mpz(a.integer_value());
        case K::Rationals: return to.from_mpq(a.rational_value());
        case K::Series: {
            RingHom base(a.spec().base(), to.base());
            std::vector<RingElement> c;
            c.reserve(a.series_coeffs().size());
            for (const auto& x : a.series_coeffs()) c.push_back(hom_apply(base, x));
            return RingElement(to, std::move(c));
        }
        default: fail("UnsupportedHomomorphism", "no supported map from " + a.spec().str());
    }
}

std::optional<mpq_class> pi_adic_valuation(const RingElement& a) {
    const auto& pay = a.pi_adic();
    int p = a.spec().prime();
    int n = a.spec().precision();
    std::optional<mpq_class> best;
    for (size_t k = 0; k < pay.c.size(); ++k) {
        if (pay.c[k] == 0) continue;
        mpz_class v = pay.c[k];
        int ord = 0;
        while (ord < n && mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(p))) {
            v /= p;
            ++ord;
        }
        mpq_class val = mpq_class(ord) + mpq_class(static_cast<long>(k), p - 1);
        val.canonicalize();
        if (!best || val < *best) best = val;
    }
    return best;
}

}  // namespace twd
