#pragma once

#include <string>
#include <vector>

#include "twderham/ring.hpp"

namespace twd {

/// Dense square matrix over a RingSpec. Sized for the desk-scale problems
/// of this project (n stays in single digits); determinants go through
/// cofactor expansion so inversion works over any commutative ring in
/// which det is a unit.
class SquareMatrix {
  public:
    SquareMatrix(RingSpec spec, int n);
    static SquareMatrix identity(const RingSpec& spec, int n);
    /// Row-major bracketed list "[a,b;c,d]"; entries parsed as integer or
    /// rational literals in the spec.
    static SquareMatrix parse(const RingSpec& spec, const std::string& text);

    const RingSpec& spec() const { return spec_; }
    int size() const { return n_; }
    const RingElement& at(int i, int j) const;
    void set(int i, int j, RingElement v);

    bool is_symmetric() const;
    RingElement det() const;
    /// Adjugate over det; fails with MatrixNotInvertible when det is not a
    /// unit in the ring.
    SquareMatrix inverse() const;
    SquareMatrix operator*(const SquareMatrix& o) const;
    bool operator==(const SquareMatrix& o) const;

    SquareMatrix map(const RingSpec& target,
                     const std::function<RingElement(const RingElement&)>& f) const;

    std::string str() const;

  private:
    RingSpec spec_;
    int n_;
    std::vector<RingElement> a_;
};

}  // namespace twd
