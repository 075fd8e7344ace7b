#pragma once
#include <array>
#include <complex>
#include <cstddef>

namespace prf {

using Complex = std::complex<double>;

// 2x2 complex operator on the two-level Hilbert space, row-major in the
// (ground, excited) basis: m[0]=<g|A|g>, m[1]=<g|A|e>, m[2]=<e|A|g>, m[3]=<e|A|e>.
struct Operator2 {
  std::array<Complex, 4> m{};

  Complex& operator()(int r, int c) { return m[static_cast<std::size_t>(r * 2 + c)]; }
  const Complex& operator()(int r, int c) const { return m[static_cast<std::size_t>(r * 2 + c)]; }

  Operator2& operator+=(const Operator2& o);
  Operator2& operator-=(const Operator2& o);
  Operator2& operator*=(Complex s);
  friend Operator2 operator+(Operator2 a, const Operator2& b) { return a += b; }
  friend Operator2 operator-(Operator2 a, const Operator2& b) { return a -= b; }
  friend Operator2 operator*(Complex s, Operator2 a) { return a *= s; }
};

// A density matrix is an Operator2 expected to satisfy trace ~ 1, Hermiticity,
// eigenvalues >= -1e-8 and purity <= 1 + 1e-8; checks live in the engine.
using DensityMatrix = Operator2;

Operator2 matmul(const Operator2& a, const Operator2& b);
Operator2 adjoint(const Operator2& a);
Complex trace(const Operator2& a);
Operator2 commutator(const Operator2& a, const Operator2& b);
double fro_norm(const Operator2& a);

Operator2 sigma_minus();   // |g><e|
Operator2 sigma_plus();    // |e><g|
Operator2 sigma_pp();      // sigma_plus * sigma_minus = |e><e|
Operator2 identity2();

struct EigResult {
  std::array<double, 2> values;    // ascending
  std::array<Complex, 4> vectors;  // column k = vectors[k], vectors[k+2]
};

// Closed-form Hermitian 2x2 eigendecomposition; eigenvectors orthonormal,
// reconstruction residual ||A - V diag V^dag|| <= 1e-12 * ||A||.
EigResult eig_hermitian_2x2(const Operator2& a);

// exp(-i H tau) for Hermitian H, closed form via H = a I + b.sigma.
Operator2 expm_skew(const Operator2& h, double tau);

// Column-stacked Liouville vector: v[c*2+r] = rho(r,c) -> (rho_gg, rho_eg, rho_ge, rho_ee).
struct LVec {
  std::array<Complex, 4> v{};
  Complex& operator[](std::size_t i) { return v[i]; }
  const Complex& operator[](std::size_t i) const { return v[i]; }
};

// 4x4 superoperator acting on LVec, row-major.
struct LMap {
  std::array<Complex, 16> a{};
  Complex& operator()(int r, int c) { return a[static_cast<std::size_t>(r * 4 + c)]; }
  const Complex& operator()(int r, int c) const { return a[static_cast<std::size_t>(r * 4 + c)]; }

  LMap& operator+=(const LMap& o);
  LMap& operator*=(Complex s);
  friend LMap operator+(LMap x, const LMap& y) { return x += y; }
  friend LMap operator*(Complex s, LMap x) { return x *= s; }
};

LVec vec(const Operator2& rho);
Operator2 unvec(const LVec& v);
LVec apply(const LMap& l, const LVec& x);
LMap matmul(const LMap& a, const LMap& b);

// vec(A rho) = spre(A) vec(rho); vec(rho B) = spost(B) vec(rho) = (B^T (x) I) vec(rho).
LMap spre(const Operator2& a);
LMap spost(const Operator2& b);

}  // namespace prf
