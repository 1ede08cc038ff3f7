#pragma once

// Exact algebra of constant-coefficient cubic forms P^{abc} d_c psi d_a d_b psi:
// null-condition validation, classification against the classical generator
// groups, and reduction to the radial (U,V) null frame.
//
// Validation and reduction run in exact rational arithmetic: the null condition
// is a polynomial identity and sampling-based checks can false-positive.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <Eigen/Dense>

namespace tailwave {

using Rat = boost::rational<long long>;

struct NotRadialCompatible : std::runtime_error {
  explicit NotRadialCompatible(const std::string& monomial)
      : std::runtime_error("not radial-compatible: angular dependence survives in monomial " +
                           monomial),
        offending_monomial(monomial) {}
  std::string offending_monomial;
};

struct NullConditionViolation : std::runtime_error {
  explicit NullConditionViolation(const std::string& monomial)
      : std::runtime_error("null condition violated: surviving monomial " + monomial),
        surviving_monomial(monomial) {}
  std::string surviving_monomial;
};

// ---------------------------------------------------------------------------
// Polynomials in the unit direction (w1,w2,w3), reduced mod w3^2 = 1-w1^2-w2^2.

class OmegaPoly {
public:
  using Exponents = std::array<int, 3>;

  OmegaPoly() = default;
  static OmegaPoly constant(const Rat& c) {
    OmegaPoly p;
    if (c != Rat(0)) p.terms_[{0, 0, 0}] = c;
    return p;
  }
  static OmegaPoly variable(int i) {  // w_i, i in {1,2,3}
    OmegaPoly p;
    Exponents e{0, 0, 0};
    e[i - 1] = 1;
    p.terms_[e] = Rat(1);
    return p;
  }

  void add(const Exponents& e, const Rat& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (c != Rat(0)) terms_[e] = c;
    } else {
      it->second += c;
      if (it->second == Rat(0)) terms_.erase(it);
    }
  }

  OmegaPoly& operator+=(const OmegaPoly& o) {
    for (const auto& [e, c] : o.terms_) add(e, c);
    return *this;
  }

  OmegaPoly operator*(const OmegaPoly& o) const {
    OmegaPoly r;
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : o.terms_)
        r.add({e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]}, c1 * c2);
    return r;
  }

  /// Canonical form: eliminate w3^2 via the unit-sphere relation.
  void reduce() {
    bool again = true;
    while (again) {
      again = false;
      for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        if (it->first[2] >= 2) {
          const Exponents e = it->first;
          const Rat c = it->second;
          terms_.erase(it);
          const Exponents base{e[0], e[1], e[2] - 2};
          add(base, c);                                     //  1
          add({base[0] + 2, base[1], base[2]}, -c);         // -w1^2
          add({base[0], base[1] + 2, base[2]}, -c);         // -w2^2
          again = true;
          break;
        }
      }
    }
  }

  bool isZero() const { return terms_.empty(); }

  bool isConstant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_.begin()->first == Exponents{0, 0, 0});
  }

  Rat constantTerm() const {
    auto it = terms_.find({0, 0, 0});
    return it == terms_.end() ? Rat(0) : it->second;
  }

  /// First non-constant monomial, printed for diagnostics.
  std::optional<std::string> firstAngularMonomial() const {
    for (const auto& [e, c] : terms_) {
      if (e == Exponents{0, 0, 0}) continue;
      std::ostringstream os;
      os << c.numerator();
      if (c.denominator() != 1) os << "/" << c.denominator();
      for (int i = 0; i < 3; ++i) {
        if (e[i] == 0) continue;
        os << "*w" << (i + 1);
        if (e[i] > 1) os << "^" << e[i];
      }
      return os.str();
    }
    return std::nullopt;
  }

  std::optional<std::string> firstMonomial() const {
    if (terms_.empty()) return std::nullopt;
    if (!isConstant()) return firstAngularMonomial();
    std::ostringstream os;
    const Rat c = constantTerm();
    os << c.numerator();
    if (c.denominator() != 1) os << "/" << c.denominator();
    return os.str();
  }

private:
  std::map<Exponents, Rat> terms_;
};

// ---------------------------------------------------------------------------

/// Cubic coefficients P[a][b][c], symmetric in (a,b) (the second-derivative
/// slot commutes); symmetrized at construction.
class NullFormTensor {
public:
  NullFormTensor() { coeff_.fill(Rat(0)); }

  Rat& at(int a, int b, int c) { return coeff_[idx(a, b, c)]; }
  const Rat& at(int a, int b, int c) const { return coeff_[idx(a, b, c)]; }

  void addTerm(int a, int b, int c, const Rat& v) {
    // symmetrize in (a,b)
    coeff_[idx(a, b, c)] += v / 2;
    coeff_[idx(b, a, c)] += v / 2;
  }

  void symmetrize() {
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        for (int c = 0; c < 4; ++c) {
          const Rat s = (coeff_[idx(a, b, c)] + coeff_[idx(b, a, c)]) / 2;
          coeff_[idx(a, b, c)] = s;
          coeff_[idx(b, a, c)] = s;
        }
  }

  NullFormTensor& operator+=(const NullFormTensor& o) {
    for (int i = 0; i < 64; ++i) coeff_[i] += o.coeff_[i];
    return *this;
  }
  NullFormTensor operator*(const Rat& s) const {
    NullFormTensor r = *this;
    for (auto& c : r.coeff_) c *= s;
    return r;
  }

  bool isZero() const {
    for (const auto& c : coeff_)
      if (c != Rat(0)) return false;
    return true;
  }

  double frobeniusNorm() const {
    double s = 0;
    for (const auto& c : coeff_) {
      const double v = boost::rational_cast<double>(c);
      s += v * v;
    }
    return std::sqrt(s);
  }

private:
  static int idx(int a, int b, int c) { return (a * 4 + b) * 4 + c; }
  std::array<Rat, 64> coeff_;
};

// Minkowski inverse metric, signature (-,+,+,+).
inline Rat minkowski(int a, int b) {
  if (a != b) return Rat(0);
  return a == 0 ? Rat(-1) : Rat(1);
}

// --- classical generator groups -------------------------------------------

/// P1: d_alpha psi Box psi
inline NullFormTensor p1_generator(int alpha) {
  NullFormTensor t;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) t.at(a, b, alpha) = minkowski(a, b);
  return t;
}

/// P2: d_alpha (d_gamma psi d^gamma psi) = 2 d^gamma psi d_alpha d_gamma psi
inline NullFormTensor p2_generator(int alpha) {
  NullFormTensor t;
  for (int g = 0; g < 4; ++g)
    for (int d = 0; d < 4; ++d)
      if (minkowski(g, d) != Rat(0)) t.addTerm(alpha, g, d, 2 * minkowski(g, d));
  return t;
}

/// P3: d_alpha psi d_beta d_gamma psi - d_beta psi d_alpha d_gamma psi, alpha<beta
inline NullFormTensor p3_generator(int alpha, int beta, int gamma) {
  NullFormTensor t;
  t.addTerm(beta, gamma, alpha, Rat(1));
  t.addTerm(alpha, gamma, beta, Rat(-1));
  return t;
}

inline const std::vector<NullFormTensor>& p1p2_generators() {
  static const std::vector<NullFormTensor> gens = [] {
    std::vector<NullFormTensor> v;
    for (int a = 0; a < 4; ++a) v.push_back(p1_generator(a));
    for (int a = 0; a < 4; ++a) v.push_back(p2_generator(a));
    return v;
  }();
  return gens;
}

inline const std::vector<NullFormTensor>& all_generators() {
  static const std::vector<NullFormTensor> gens = [] {
    std::vector<NullFormTensor> v = p1p2_generators();
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        for (int g = 0; g < 4; ++g) v.push_back(p3_generator(a, b, g));
    return v;
  }();
  return gens;
}

// --- null-condition validation --------------------------------------------

/// Residual of P(xi,xi,xi) on the null cone, reduced to canonical form for
/// xi = (s, w), s = +-1.  Empty optional means the form is null.
inline std::optional<std::string> null_violation_monomial(const NullFormTensor& P) {
  for (int s : {+1, -1}) {
    OmegaPoly total;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) {
          const Rat coef = P.at(a, b, c);
          if (coef == Rat(0)) continue;
          OmegaPoly term = OmegaPoly::constant(coef);
          for (int slot : {a, b, c}) {
            term = term * (slot == 0 ? OmegaPoly::constant(Rat(s))
                                     : OmegaPoly::variable(slot));
          }
          total += term;
        }
    total.reduce();
    if (!total.isZero()) {
      auto m = total.firstMonomial();
      std::ostringstream os;
      os << "xi0=" << (s > 0 ? "+1" : "-1") << ": " << (m ? *m : "?");
      return os.str();
    }
  }
  return std::nullopt;
}

inline bool validate_null(const NullFormTensor& P) {
  return !null_violation_monomial(P).has_value();
}

// --- radial reduction ------------------------------------------------------

/// Coefficients of the radially reduced form
///   P = sum_{a,bc} c[a][bc] (D_a psi)(D_b D_c psi)
///     + sum_a tr[a] (D_a psi) (r^-1 d_r psi)
///     + semi_uv (U psi)(V psi),
/// a in {U,V}, bc in {UU,UV,VV}.  Null constraint: c[U][UU] = c[V][VV] = 0
/// and no (U psi)^2 / (V psi)^2 semilinear monomials.
struct RadialNullForm {
  enum Dir { U = 0, V = 1 };
  enum Pair { UU = 0, UV = 1, VV = 2 };

  std::array<std::array<Rat, 3>, 2> c{};   // c[a][bc]
  std::array<Rat, 2> tr{};                 // angular-trace lower-order part
  Rat semi_uv{0};                          // semilinear (U psi)(V psi)
  std::string name;

  bool isZero() const {
    for (const auto& row : c)
      for (const auto& v : row)
        if (v != Rat(0)) return false;
    return tr[0] == Rat(0) && tr[1] == Rat(0) && semi_uv == Rat(0);
  }

  bool quasilinear() const {
    for (const auto& row : c)
      for (const auto& v : row)
        if (v != Rat(0)) return true;
    return tr[0] != Rat(0) || tr[1] != Rat(0);
  }

  double cd(int a, int bc) const { return boost::rational_cast<double>(c[a][bc]); }
  double trd(int a) const { return boost::rational_cast<double>(tr[a]); }
  double semid() const { return boost::rational_cast<double>(semi_uv); }
};

/// Reduce a validated tensor to the radial frame.  Substitutes the radial
/// derivative structure, checks exactly that all angular dependence cancels,
/// then rewrites (d_t, d_r) in terms of (U, V)/2.
inline RadialNullForm radial_reduce(const NullFormTensor& P) {
  if (auto m = null_violation_monomial(P)) throw NullConditionViolation(*m);

  // first-derivative symbols: 0 = dt, 1 = dr
  // second-derivative symbols: 0 = dtt, 1 = dtr, 2 = drr, 3 = q (= r^-1 dr psi)
  OmegaPoly acc[2][4];

  auto firstFactor = [](int c) -> std::pair<int, OmegaPoly> {
    if (c == 0) return {0, OmegaPoly::constant(Rat(1))};
    return {1, OmegaPoly::variable(c)};
  };

  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int g = 0; g < 4; ++g) {
        const Rat coef = P.at(a, b, g);
        if (coef == Rat(0)) continue;
        auto [fs, fw] = firstFactor(g);
        const OmegaPoly base = fw * OmegaPoly::constant(coef);
        if (a == 0 && b == 0) {
          acc[fs][0] += base;
        } else if (a == 0 || b == 0) {
          const int i = a == 0 ? b : a;
          acc[fs][1] += base * OmegaPoly::variable(i);
        } else {
          // d_i d_j psi = w_i w_j drr + (delta_ij - w_i w_j) q
          const OmegaPoly wij = OmegaPoly::variable(a) * OmegaPoly::variable(b);
          acc[fs][2] += base * wij;
          OmegaPoly qpart;
          if (a == b) qpart += OmegaPoly::constant(Rat(1));
          qpart += wij * OmegaPoly::constant(Rat(-1));
          acc[fs][3] += base * qpart;
        }
      }

  Rat A[2][4];
  for (int f = 0; f < 2; ++f)
    for (int s = 0; s < 4; ++s) {
      acc[f][s].reduce();
      if (!acc[f][s].isConstant())
        throw NotRadialCompatible(*acc[f][s].firstAngularMonomial());
      A[f][s] = acc[f][s].constantTerm();
    }

  // dt = (U+V)/2, dr = (V-U)/2; dtt = (UU+2UV+VV)/4, dtr = (VV-UU)/4,
  // drr = (UU-2UV+VV)/4.
  const Rat h(1, 2);
  // weight of U resp. V in each first-derivative symbol
  const Rat fw[2][2] = {{h, h}, {-h, h}};  // [dt|dr][U|V]
  // weight of UU, UV, VV in each second-derivative symbol
  const Rat q4(1, 4), q2(1, 2);
  const Rat sw[3][3] = {{q4, q2, q4},      // dtt
                        {-q4, Rat(0), q4}, // dtr
                        {q4, -q2, q4}};    // drr

  RadialNullForm out;
  for (int f = 0; f < 2; ++f) {
    for (int s = 0; s < 3; ++s) {
      if (A[f][s] == Rat(0)) continue;
      for (int d = 0; d < 2; ++d)
        for (int p = 0; p < 3; ++p) out.c[d][p] += A[f][s] * fw[f][d] * sw[s][p];
    }
    if (A[f][3] != Rat(0))
      for (int d = 0; d < 2; ++d) out.tr[d] += A[f][3] * fw[f][d];
  }

  // The null condition restricted to radial covectors kills these slots.
  if (out.c[RadialNullForm::U][RadialNullForm::UU] != Rat(0) ||
      out.c[RadialNullForm::V][RadialNullForm::VV] != Rat(0))
    throw NullConditionViolation("radial UU/VV slot nonzero");
  return out;
}

// --- evaluation on radial fields ------------------------------------------

struct RadialDerivs {
  double u1, v1, uu, uv, vv, q;  // psi-level derivatives
};

/// Chain rule psi = Psi/r: psi-level first/second null derivatives from the
/// radiation-field values.  U r = -1, V r = +1.
inline RadialDerivs psi_derivs(double UPsi, double VPsi, double UVPsi, double UUPsi,
                               double VVPsi, double Psi, double r) {
  const double ir = 1.0 / r, ir2 = ir * ir, ir3 = ir2 * ir;
  RadialDerivs d;
  d.u1 = UPsi * ir + Psi * ir2;
  d.v1 = VPsi * ir - Psi * ir2;
  d.uu = UUPsi * ir + 2.0 * UPsi * ir2 + 2.0 * Psi * ir3;
  d.vv = VVPsi * ir - 2.0 * VPsi * ir2 + 2.0 * Psi * ir3;
  d.uv = UVPsi * ir + (VPsi - UPsi) * ir2 - 2.0 * Psi * ir3;
  d.q = (0.5 * (VPsi - UPsi) * ir - Psi * ir2) * ir;  // r^-1 d_r psi
  return d;
}

/// r * P(d psi, d^2 psi) given Psi-level inputs.  This is the source of the
/// radiation-field equation UV Psi = -r P.
inline double evaluate_radial_rhs(const RadialNullForm& f, double UPsi, double VPsi,
                                  double UVPsi, double UUPsi, double VVPsi,
                                  double Psi, double r) {
  const RadialDerivs d = psi_derivs(UPsi, VPsi, UVPsi, UUPsi, VVPsi, Psi, r);
  const double second[2][3] = {{d.uu, d.uv, d.vv}, {d.uu, d.uv, d.vv}};
  double P = 0.0;
  const double first[2] = {d.u1, d.v1};
  for (int a = 0; a < 2; ++a) {
    for (int bc = 0; bc < 3; ++bc) {
      const double c = f.cd(a, bc);
      if (c != 0.0) P += c * first[a] * second[a][bc];
    }
    const double t = f.trd(a);
    if (t != 0.0) P += t * first[a] * d.q;
  }
  const double s = f.semid();
  if (s != 0.0) P += s * d.u1 * d.v1;
  return r * P;
}

/// Coefficient of d_tau Pi in r*P: the quasilinear principal-part correction.
/// kappa_UU = (1+h')^2, kappa_UV = (1-h'^2), kappa_VV = (1-h')^2 are the
/// d_tau^2 weights of the frame second derivatives.
inline double quasilinear_principal_coeff(const RadialNullForm& f, double UPsi,
                                          double VPsi, double Psi, double r,
                                          double mu, double nu) {
  const double ir = 1.0 / r, ir2 = ir * ir;
  const double u1 = UPsi * ir + Psi * ir2;
  const double v1 = VPsi * ir - Psi * ir2;
  const double kappa[3] = {mu * mu, mu * nu, nu * nu};
  double aq = 0.0;
  const double first[2] = {u1, v1};
  for (int a = 0; a < 2; ++a)
    for (int bc = 0; bc < 3; ++bc) {
      const double c = f.cd(a, bc);
      if (c != 0.0) aq += c * first[a] * kappa[bc];
    }
  return aq;
}

// --- classification --------------------------------------------------------

struct Classification {
  bool in_span_p1p2 = false;
  double residual_norm = 0.0;            // over the full P1+P2+P3 span
  double restricted_residual = 0.0;      // over P1+P2 only
  std::vector<double> coefficients;      // over the concatenated generator list
  double predicted_tail_exponent = -1.0; // u-power in psi ~ v^-1 u^q
};

inline Eigen::VectorXd flatten(const NullFormTensor& t) {
  Eigen::VectorXd v(64);
  int k = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) v(k++) = boost::rational_cast<double>(t.at(a, b, c));
  return v;
}

/// Decompose a validated null form over the generator groups by pivoted
/// least squares.  The spanning set is redundant; only the in_span flag and
/// the residuals carry semantic weight.
inline Classification classify(const NullFormTensor& P) {
  if (auto m = null_violation_monomial(P)) throw NullConditionViolation(*m);

  const auto& gens = all_generators();
  Eigen::MatrixXd G(64, static_cast<int>(gens.size()));
  for (int j = 0; j < G.cols(); ++j) G.col(j) = flatten(gens[j]);
  const Eigen::VectorXd b = flatten(P);

  Classification out;
  const Eigen::VectorXd x = G.colPivHouseholderQr().solve(b);
  out.coefficients.assign(x.data(), x.data() + x.size());
  out.residual_norm = (G * x - b).norm();

  const auto& restr = p1p2_generators();
  Eigen::MatrixXd R(64, static_cast<int>(restr.size()));
  for (int j = 0; j < R.cols(); ++j) R.col(j) = flatten(restr[j]);
  const Eigen::VectorXd xr = R.colPivHouseholderQr().solve(b);
  out.restricted_residual = (R * xr - b).norm();

  const double scale = std::max(1.0, b.norm());
  out.in_span_p1p2 = out.restricted_residual <= 1e-10 * scale;
  out.predicted_tail_exponent = out.in_span_p1p2 ? -2.0 : -1.0;
  return out;
}

/// Radial-level classification for forms given directly in the (U,V) frame.
/// The quasilinear slots + trace parts are tested against the span of the two
/// radial reductions (of the alpha = 0 time-derivative generators); a purely
/// semilinear (U psi)(V psi) term also carries the faster tail.
inline Classification classify_radial(const RadialNullForm& f) {
  Eigen::Matrix<double, 6, 2> G;
  // columns: reductions of the first- and second-group alpha = 0 generators
  // over slots (cU_UV, cU_VV, cV_UU, cV_UV, trU, trV)
  G << -0.5, -0.5,
        0.0, -0.5,
        0.0, -0.5,
       -0.5, -0.5,
        1.0,  0.0,
        1.0,  0.0;
  Eigen::Matrix<double, 6, 1> b;
  b << f.cd(RadialNullForm::U, RadialNullForm::UV),
       f.cd(RadialNullForm::U, RadialNullForm::VV),
       f.cd(RadialNullForm::V, RadialNullForm::UU),
       f.cd(RadialNullForm::V, RadialNullForm::UV),
       f.trd(0), f.trd(1);
  Classification out;
  const Eigen::Vector2d x = G.colPivHouseholderQr().solve(b);
  out.coefficients = {x(0), x(1)};
  out.restricted_residual = (G * x - b).norm();
  out.residual_norm = out.restricted_residual;
  const double scale = std::max(1.0, b.norm());
  out.in_span_p1p2 = out.restricted_residual <= 1e-10 * scale;
  out.predicted_tail_exponent = out.in_span_p1p2 ? -2.0 : -1.0;
  return out;
}

}  // namespace tailwave
