#include "pulsedrf/algebra.hpp"

#include <cmath>

namespace prf {

Operator2& Operator2::operator+=(const Operator2& o) {
  for (int i = 0; i < 4; ++i) m[static_cast<std::size_t>(i)] += o.m[static_cast<std::size_t>(i)];
  return *this;
}

Operator2& Operator2::operator-=(const Operator2& o) {
  for (int i = 0; i < 4; ++i) m[static_cast<std::size_t>(i)] -= o.m[static_cast<std::size_t>(i)];
  return *this;
}

Operator2& Operator2::operator*=(Complex s) {
  for (auto& x : m) x *= s;
  return *this;
}

Operator2 matmul(const Operator2& a, const Operator2& b) {
  Operator2 c;
  c.m[0] = a.m[0] * b.m[0] + a.m[1] * b.m[2];
  c.m[1] = a.m[0] * b.m[1] + a.m[1] * b.m[3];
  c.m[2] = a.m[2] * b.m[0] + a.m[3] * b.m[2];
  c.m[3] = a.m[2] * b.m[1] + a.m[3] * b.m[3];
  return c;
}

Operator2 adjoint(const Operator2& a) {
  Operator2 c;
  c.m[0] = std::conj(a.m[0]);
  c.m[1] = std::conj(a.m[2]);
  c.m[2] = std::conj(a.m[1]);
  c.m[3] = std::conj(a.m[3]);
  return c;
}

Complex trace(const Operator2& a) { return a.m[0] + a.m[3]; }

Operator2 commutator(const Operator2& a, const Operator2& b) {
  return matmul(a, b) - matmul(b, a);
}

double fro_norm(const Operator2& a) {
  double s = 0.0;
  for (const auto& x : a.m) s += std::norm(x);
  return std::sqrt(s);
}

Operator2 sigma_minus() {
  Operator2 s;
  s(0, 1) = 1.0;
  return s;
}

Operator2 sigma_plus() {
  Operator2 s;
  s(1, 0) = 1.0;
  return s;
}

Operator2 sigma_pp() {
  Operator2 s;
  s(1, 1) = 1.0;
  return s;
}

Operator2 identity2() {
  Operator2 s;
  s(0, 0) = 1.0;
  s(1, 1) = 1.0;
  return s;
}

EigResult eig_hermitian_2x2(const Operator2& a) {
  // H = [[p, q*], [q, r]] with p, r real. Eigenvalues m +- w, w = sqrt(d^2 + |q|^2),
  // d = (r - p)/2, m = (p + r)/2. Eigenvectors built from the larger pivot for stability.
  const double p = a.m[0].real();
  const double r = a.m[3].real();
  const Complex q = a.m[2];  // <e|A|g>
  const double d = 0.5 * (r - p);
  const double m = 0.5 * (p + r);
  const double aq = std::abs(q);
  const double w = std::hypot(d, aq);

  EigResult out;
  out.values = {m - w, m + w};
  if (w == 0.0) {
    out.vectors = {1.0, 0.0, 0.0, 1.0};
    return out;
  }
  // (H - (m - w)) v = 0: v_low = (d + w, -q) ~ (-conj(q), w - d); pick the branch
  // whose real pivot cannot vanish (d + w for d >= 0, w - d otherwise).
  Complex v0g, v0e;
  if (d >= 0.0) {
    v0g = Complex(d + w, 0.0);
    v0e = -q;
  } else {
    v0g = -std::conj(q);
    v0e = Complex(w - d, 0.0);
  }
  const double n0 = std::sqrt(std::norm(v0g) + std::norm(v0e));
  v0g /= n0;
  v0e /= n0;
  // v_high orthogonal to v_low: (-conj(v0e), conj(v0g)).
  out.vectors = {v0g, -std::conj(v0e), v0e, std::conj(v0g)};
  return out;
}

Operator2 expm_skew(const Operator2& h, double tau) {
  // exp(-i tau (m I + d sz' + q' off-diag)) with the same split as the eigensolver:
  // exp(-i m tau) [cos(w tau) I - i sin(w tau)/w (H - m I)].
  const double p = h.m[0].real();
  const double r = h.m[3].real();
  const Complex q = h.m[2];
  const double d = 0.5 * (r - p);
  const double m = 0.5 * (p + r);
  const double w = std::hypot(d, std::abs(q));

  const Complex phase = std::polar(1.0, -m * tau);
  Operator2 u;
  if (w == 0.0) {
    u(0, 0) = phase;
    u(1, 1) = phase;
    return u;
  }
  const double c = std::cos(w * tau);
  const double s = std::sin(w * tau) / w;
  const Complex is(0.0, s);
  u.m[0] = phase * (c - is * (p - m));
  u.m[1] = phase * (-is * h.m[1]);
  u.m[2] = phase * (-is * h.m[2]);
  u.m[3] = phase * (c - is * (r - m));
  return u;
}

LMap& LMap::operator+=(const LMap& o) {
  for (int i = 0; i < 16; ++i) a[static_cast<std::size_t>(i)] += o.a[static_cast<std::size_t>(i)];
  return *this;
}

LMap& LMap::operator*=(Complex s) {
  for (auto& x : a) x *= s;
  return *this;
}

LVec vec(const Operator2& rho) {
  LVec v;
  v[0] = rho(0, 0);
  v[1] = rho(1, 0);
  v[2] = rho(0, 1);
  v[3] = rho(1, 1);
  return v;
}

Operator2 unvec(const LVec& v) {
  Operator2 rho;
  rho(0, 0) = v[0];
  rho(1, 0) = v[1];
  rho(0, 1) = v[2];
  rho(1, 1) = v[3];
  return rho;
}

LVec apply(const LMap& l, const LVec& x) {
  LVec y;
  for (int r = 0; r < 4; ++r) {
    Complex s = 0.0;
    for (int c = 0; c < 4; ++c) s += l(r, c) * x[static_cast<std::size_t>(c)];
    y[static_cast<std::size_t>(r)] = s;
  }
  return y;
}

LMap matmul(const LMap& a, const LMap& b) {
  LMap c;
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 4; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex{}) continue;
      for (int col = 0; col < 4; ++col) c(r, col) += ark * b(k, col);
    }
  return c;
}

LMap spre(const Operator2& a) {
  // vec(A rho): block-diagonal copies of A over the column index.
  LMap l;
  for (int c = 0; c < 2; ++c)
    for (int r = 0; r < 2; ++r)
      for (int k = 0; k < 2; ++k) l(c * 2 + r, c * 2 + k) = a(r, k);
  return l;
}

LMap spost(const Operator2& b) {
  // vec(rho B) = (B^T (x) I) vec(rho).
  LMap l;
  for (int c = 0; c < 2; ++c)
    for (int k = 0; k < 2; ++k)
      for (int r = 0; r < 2; ++r) l(c * 2 + r, k * 2 + r) = b(k, c);
  return l;
}

}  // namespace prf
