#pragma once

#include <optional>
#include <string>

#include "lpbm/core/error.hpp"
#include "lpbm/functionals/u_function.hpp"
#include "lpbm/geometry/body.hpp"
#include "lpbm/measures/density.hpp"

namespace lpbm {

// A set functional F the verifiers evaluate on bodies.
//   measure             nu(K) for a MeasureSpec
//   wills               sum of intrinsic volumes
//   generalized_wills   W_u(K;E)
//   polar_quermass      W_i(K*), defined for 0 in int K
struct FunctionalSpec {
  enum class Kind { measure, wills, generalized_wills, polar_quermass };
  Kind kind = Kind::measure;
  MeasureSpec measure = MeasureSpec::lebesgue(2);
  std::optional<Body> gauge;
  UFunction u;
  int index = 0;

  static FunctionalSpec of_measure(MeasureSpec m) {
    FunctionalSpec f;
    f.kind = Kind::measure;
    f.measure = std::move(m);
    return f;
  }
  static FunctionalSpec wills() {
    FunctionalSpec f;
    f.kind = Kind::wills;
    return f;
  }
  static FunctionalSpec generalized_wills(Body E, UFunction u) {
    FunctionalSpec f;
    f.kind = Kind::generalized_wills;
    f.gauge = std::move(E);
    f.u = u;
    return f;
  }
  static FunctionalSpec polar_quermass(int i) {
    FunctionalSpec f;
    f.kind = Kind::polar_quermass;
    f.index = i;
    return f;
  }

  // Monotone under inclusion in the increasing sense?
  bool increasing() const { return kind != Kind::polar_quermass; }

  void validate(int n) const {
    switch (kind) {
      case Kind::measure:
        if (measure.dim != n) throw FunctionalError("functional: measure dimension differs from body dimension");
        break;
      case Kind::wills: break;
      case Kind::generalized_wills: {
        if (!gauge) throw FunctionalError("functional: generalized Wills needs a gauge body");
        if (gauge->dim() != n) throw FunctionalError("functional: gauge dimension differs from body dimension");
        u.validate();
        if (!probe_strictly_increasing(u, 256, 0x5eed)) throw FunctionalError("functional: u is not strictly increasing");
        const DirectionGrid g(n);
        if (gauge->is_table() || !origin_interior(*gauge, g)) throw FunctionalError("functional: origin not interior to E");
        break;
      }
      case Kind::polar_quermass:
        if (index < 0 || index >= n) throw FunctionalError("functional: polar quermassintegral index must lie in [0, n-1]");
        if (n > 3) throw FunctionalError("functional: polar quermassintegrals need n <= 3");
        break;
    }
  }

  std::string describe() const {
    switch (kind) {
      case Kind::measure: return "measure:" + measure.describe();
      case Kind::wills: return "wills";
      case Kind::generalized_wills: return "generalized_wills:" + u.describe();
      case Kind::polar_quermass: return "polar_quermass:" + std::to_string(index);
    }
    return "?";
  }
};

}  // namespace lpbm
