#pragma once

#include <map>
#include <optional>
#include <vector>

#include "heightkit/heights.hpp"
#include "heightkit/matrix.hpp"

namespace heightkit {

/// g = (g_v) in GL(n, A_Q) up to the data needed for heights: a rational
/// `default` matrix used at every place not listed, rational overrides at
/// finitely many primes, and an optional override at infinity that may be real.
class AdelicGroupElement {
 public:
  static AdelicGroupElement identity(std::size_t n);

  std::size_t size() const { return default_.rows(); }
  const RatMatrix& default_component() const { return default_; }
  const std::map<BigInt, RatMatrix>& finite_overrides() const { return finite_; }

  /// Copy with the component at v replaced; throws SingularMatrixError.
  AdelicGroupElement with(const Place& v, const RatMatrix& g) const;
  AdelicGroupElement with_real_infinite(const RealMatrix& g) const;
  AdelicGroupElement with_default(const RatMatrix& g) const;

  /// Rational component at v (the default when v is not overridden).
  /// Throws ValidationError at infinity when that component is real.
  const RatMatrix& rational_component(const Place& v) const;
  bool infinite_is_rational() const { return !real_inf_.has_value(); }
  bool has_infinite_override() const { return rat_inf_ || real_inf_; }
  RealMatrix real_infinite_component() const;
  /// Every stored matrix, including the default, is diagonal.
  bool is_diagonal() const;

 private:
  RatMatrix default_;
  std::map<BigInt, RatMatrix> finite_;
  std::optional<RatMatrix> rat_inf_;
  std::optional<RealMatrix> real_inf_;
};

/// Character of the diagonal torus: diag(t_1..t_n) -> prod t_i^a_i.
struct Character {
  IntVector exponents;
  Rat evaluate(const RatMatrix& diagonal) const;
  Real evaluate(const RealMatrix& diagonal) const;
};

/// Weight of a monomial section under g.s = s o g^(-1): x^a has weight -a.
Character weight_of(const Section& monomial);

/// Image of x under a rational matrix.
ProjPoint translate_point(const RatMatrix& gamma, const ProjPoint& x);

/// Roy-Thunder height prod_v ||g_v e||_v^m with e primitive for x.
ExactReal twisted_height(const MetrizedLineBundle& bundle, const AdelicGroupElement& g, const ProjPoint& x);

/// ||s||'_v(x) = ||g_v.s||_v(g_v x) with g_v.s = s o g_v^(-1), evaluated by substitution.
ExactReal twisted_metric_norm(const MetrizedLineBundle& bundle, const AdelicGroupElement& g, const Place& v,
                              const Section& s, const RatVector& x);

struct TwistComparison {
  ExactReal lhs;  // twisted height of x
  ExactReal rhs;  // prod_v |chi(g_v)|_v^(-1) * H(L, s; g.x)
};

/// Weight comparison for diagonal g (rational at every place) and a monomial s.
TwistComparison compare_twisted(const MetrizedLineBundle& bundle, const AdelicGroupElement& g, const Section& s,
                                const ProjPoint& x);

/// g -> g.gamma at every place, the implicit default included.
AdelicGroupElement class_right_translate(const AdelicGroupElement& g, const RatMatrix& gamma);

}  // namespace heightkit
