#pragma once

// Variational machinery: the Euler-Lagrange operator, null Lagrangians
// built from gauge functions, energy functions, force extraction, and the
// three generalized gauge-function families g1/g2/g3.

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gaugeforge/expr.hpp"

namespace gaugeforge {

// Scalar gauge function of position and time only; velocity terms are
// rejected at construction. The body is kept in canonical form.
class GaugeFunction {
  public:
    explicit GaugeFunction(Expr body);

    const Expr& body() const { return body_; }

  private:
    Expr body_;
};

enum class Role { Standard, Null, Total };

std::string_view role_name(Role r);

// Lagrangian over {xdot, x, t}. Construction enforces the role contract:
// a body tagged Null must actually annihilate the Euler-Lagrange operator.
class Lagrangian {
  public:
    Lagrangian(Expr body, Role role);

    const Expr& body() const { return body_; }
    Role role() const { return role_; }

  private:
    Expr body_;
    Role role_;
};

// sigma in the driving sign convention: force = sigma * d2Phi/dtdx.
enum class Sign : int { Plus = +1, Minus = -1 };

inline int sign_value(Sign s) { return static_cast<int>(s); }

enum class Family { G1, G2, G3 };

std::string_view family_name(Family f);

// One g2 term: c * x^m * f(t).
struct G2Term {
    int m = 1;
    Expr c;
    Expr f;
};

// One g3 term: c * f(t) * g(x).
struct G3Term {
    Expr c;
    Expr f;
    Expr g;
};

// Tagged union of the three family parameterizations; only the container
// matching the tag is populated.
struct GaugeFamilySpec {
    Family family = Family::G1;
    std::map<std::pair<int, int>, Expr> g1;  // (m, n) -> coefficient
    std::vector<G2Term> g2;
    std::vector<G3Term> g3;

    static GaugeFamilySpec make_g1(std::map<std::pair<int, int>, Expr> coeffs);
    static GaugeFamilySpec make_g2(std::vector<G2Term> terms);
    static GaugeFamilySpec make_g3(std::vector<G3Term> terms);
};

struct GaugeFamilyResult {
    GaugeFunction phi;
    Lagrangian null_lagrangian;  // closed form, not recomputed from phi
    Expr force;                  // closed form over {x, t}
};

// d(phi)/dt as a null Lagrangian: d(phi)/dt + xdot * d(phi)/dx.
Lagrangian null_from_gauge(const GaugeFunction& phi);

// d/dt(dL/dxdot) - dL/dx, over {xddot, xdot, x, t}, simplified.
Expr euler_lagrange(const Lagrangian& L);

// True when the Euler-Lagrange expression vanishes: symbolically when the
// simplifier can close it, otherwise by seeded numeric sampling (the
// simplifier is deliberately weak on trig identities).
bool is_null(const Lagrangian& L);

// xdot * dL/dxdot - L (the Legendre-style energy function), simplified.
Expr energy_function(const Lagrangian& L);

// -d(phi)/dt; zero when phi does not depend on t.
Expr energy_from_gauge(const GaugeFunction& phi);

// sigma * d2(phi)/dt dx; with Sign::Plus this reproduces the catalog forces.
Expr force_from_gauge(const GaugeFunction& phi, Sign sigma = Sign::Plus);

// L_s + null_from_gauge(phi), tagged Total. Adding the null term leaves the
// equation of motion untouched.
Lagrangian total_with_null(const Lagrangian& standard, const GaugeFunction& phi);

// L_s + sigma * d(phi)/dt, tagged Total. The resulting equation of motion
// is the standard one with force_from_gauge(phi, sigma) on the right-hand
// side.
Lagrangian drive_with_gauge(const Lagrangian& standard, const GaugeFunction& phi,
                            Sign sigma = Sign::Plus);

// The dimensionless oscillator default: 1/2 xdot^2 - 1/2 x^2.
Lagrangian default_standard_lagrangian();

// Family constructors. Each returns the gauge function together with
// closed-form null Lagrangian and force:
//   g1: phi = sum C[m,n] x^m t^n            (m, n >= 1)
//   g2: phi = sum c_m x^m f_m(t)            (m >= 1, f over t only)
//   g3: phi = sum c f(t) g(x)               (f over t only, g over x only)
GaugeFamilyResult family_g1(const std::map<std::pair<int, int>, Expr>& coeffs);
GaugeFamilyResult family_g2(const std::vector<G2Term>& terms);
GaugeFamilyResult family_g3(const std::vector<G3Term>& terms);

// Dispatch on the spec's tag.
GaugeFamilyResult build_family(const GaugeFamilySpec& spec);

}  // namespace gaugeforge
