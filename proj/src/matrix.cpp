#include "twderham/matrix.hpp"

#include <sstream>

namespace twd {

SquareMatrix::SquareMatrix(RingSpec spec, int n) : spec_(std::move(spec)), n_(n) {
    if (n < 1) fail("InvalidArgument", "matrix size must be positive");
    a_.assign(static_cast<size_t>(n) * static_cast<size_t>(n), spec_.zero());
}

SquareMatrix SquareMatrix::identity(const RingSpec& spec, int n) {
    SquareMatrix m(spec, n);
    for (int i = 0; i < n; ++i) m.set(i, i, spec.one());
    return m;
}

const RingElement& SquareMatrix::at(int i, int j) const {
    return a_[static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j)];
}

void SquareMatrix::set(int i, int j, RingElement v) {
    if (v.spec() != spec_) fail("SpecMismatch", "matrix entry spec mismatch");
    a_[static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j)] = std::move(v);
}

bool SquareMatrix::is_symmetric() const {
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (at(i, j) != at(j, i)) return false;
    return true;
}

namespace {
RingElement det_recursive(const SquareMatrix& m, std::vector<int>& cols, int row) {
    const RingSpec& spec = m.spec();
    if (row == m.size()) return spec.one();
    RingElement acc = spec.zero();
    for (size_t k = 0; k < cols.size(); ++k) {
        int col = cols[k];
        if (col < 0) continue;
        if (m.at(row, col).is_zero()) continue;
        cols[k] = -1;
        RingElement sub = det_recursive(m, cols, row + 1);
        cols[k] = col;
        // Count live columns before position k for the cofactor sign.
        int before = 0;
        for (size_t j = 0; j < k; ++j)
            if (cols[j] >= 0) ++before;
        RingElement term = m.at(row, col) * sub;
        acc += (before % 2 == 0) ? term : -term;
    }
    return acc;
}
}  // namespace

RingElement SquareMatrix::det() const {
    std::vector<int> cols(static_cast<size_t>(n_));
    for (int j = 0; j < n_; ++j) cols[static_cast<size_t>(j)] = j;
    return det_recursive(*this, cols, 0);
}

SquareMatrix SquareMatrix::inverse() const {
    RingElement d = det();
    if (!d.is_unit())
        fail("MatrixNotInvertible", "determinant " + d.str() + " is not a unit in " + spec_.str());
    RingElement dinv = d.inverse();
    SquareMatrix inv(spec_, n_);
    if (n_ == 1) {
        inv.set(0, 0, dinv);
        return inv;
    }
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            // Minor with row j and column i removed (adjugate transposes).
            SquareMatrix minor(spec_, n_ - 1);
            int mi = 0;
            for (int r = 0; r < n_; ++r) {
                if (r == j) continue;
                int mj = 0;
                for (int c = 0; c < n_; ++c) {
                    if (c == i) continue;
                    minor.set(mi, mj, at(r, c));
                    ++mj;
                }
                ++mi;
            }
            RingElement cof = minor.det() * dinv;
            inv.set(i, j, ((i + j) % 2 == 0) ? cof : -cof);
        }
    }
    return inv;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& o) const {
    if (spec_ != o.spec_ || n_ != o.n_) fail("SpecMismatch", "matrix product shape/spec mismatch");
    SquareMatrix r(spec_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            RingElement acc = spec_.zero();
            for (int k = 0; k < n_; ++k) acc += at(i, k) * o.at(k, j);
            r.set(i, j, acc);
        }
    return r;
}

bool SquareMatrix::operator==(const SquareMatrix& o) const {
    return spec_ == o.spec_ && n_ == o.n_ && a_ == o.a_;
}

SquareMatrix SquareMatrix::map(const RingSpec& target,
                               const std::function<RingElement(const RingElement&)>& f) const {
    SquareMatrix r(target, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r.set(i, j, f(at(i, j)));
    return r;
}

SquareMatrix SquareMatrix::parse(const RingSpec& spec, const std::string& text) {
    std::string s;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        fail("ParseError", "matrix literal must be bracketed, e.g. [a,b;c,d]");
    s = s.substr(1, s.size() - 2);
    std::vector<std::vector<std::string>> rows(1);
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            rows.back().push_back(cur);
            cur.clear();
        } else if (c == ';') {
            rows.back().push_back(cur);
            cur.clear();
            rows.emplace_back();
        } else {
            cur.push_back(c);
        }
    }
    rows.back().push_back(cur);
    int n = static_cast<int>(rows.size());
    SquareMatrix m(spec, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != n)
            fail("ParseError", "matrix literal is not square");
        for (int j = 0; j < n; ++j) {
            const std::string& entry = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (entry.empty()) fail("ParseError", "empty matrix entry");
            try {
                mpq_class q(entry);
                q.canonicalize();
                m.set(i, j, spec.from_mpq(q));
            } catch (const std::invalid_argument&) {
                fail("ParseError", "bad matrix entry '" + entry + "'");
            }
        }
    }
    return m;
}

std::string SquareMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < n_; ++i) {
        if (i) os << ";";
        for (int j = 0; j < n_; ++j) {
            if (j) os << ",";
            os << at(i, j).str();
        }
    }
    os << "]";
    return os.str();
}

}  // namespace twd
