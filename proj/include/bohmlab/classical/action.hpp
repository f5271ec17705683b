#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bohmlab/field/fields.hpp"
#include "bohmlab/schrodinger/potential.hpp"

namespace bohmlab {

enum class ActionForm { PlaneWave, Circular, GridTransported };

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Classical action S(q, t).
///
/// Two closed forms of the free-particle Hamilton-Jacobi equation plus a
/// tabulated form produced by characteristic transport:
///   planeWave:  S = P.q - |P|^2 t / 2m + S0
///   circular:   S = m |q - Q0|^2 / (2 (t - te)), defined for t > te only
///   grid:       S slices on a grid, cubic in space (not periodic, since S
///               generally is not), cubic Hermite in time.
/// Evaluating outside the domain throws UndefinedGradientError.
class ActionField {
 public:
  static ActionField planeWave(Point momentum, double mass, double s0 = 0.0, int dim = 1);
  // Circular wave emitted from `center` at time `emission`.
  static ActionField circular(Point center, double mass, double emission = 0.0, int dim = 1);
  // A single slice is treated as time independent.
  static ActionField gridTransported(std::vector<RealField> slices, std::vector<double> times, double mass);

  ActionForm form() const { return form_; }
  int dim() const { return dim_; }
  double mass() const { return mass_; }
  const Point& momentum() const { return p_; }
  const Point& center() const { return center_; }
  double emission() const { return emission_; }
  std::string describe() const;
  // Human-readable domain restrictions (empty when S is defined everywhere).
  std::vector<std::string> domainWarnings() const;

  bool defined(const Point& q, double t) const;
  double evaluate(const Point& q, double t) const;
  Point gradient(const Point& q, double t) const;
  Matrix2 hessian(const Point& q, double t) const;
  double laplacian(const Point& q, double t) const;
  double timeDerivative(const Point& q, double t) const;
  // dS/dt + |grad S|^2 / 2m + V.
  double hjResidual(const Point& q, double t, const Potential& potential = Potential::free()) const;

  std::span<const RealField> slices() const { return slices_; }
  std::span<const double> times() const { return times_; }

 private:
  ActionField() = default;
  void requireDefined(const Point& q, double t) const;
  // Grid form: derivative orders per axis, optionally d/dt.
  double gridValue(const Point& q, double t, std::array<int, 2> order, bool dt) const;

  ActionForm form_ = ActionForm::PlaneWave;
  int dim_ = 1;
  double mass_ = 1.0;
  Point p_{0.0, 0.0};
  double s0_ = 0.0;
  Point center_{0.0, 0.0};
  double emission_ = 0.0;
  std::vector<RealField> slices_;
  std::vector<double> times_;
};

struct ResidualSample {
  double maxAbs = 0.0;
  std::size_t points = 0;
};

/// Max |HJ residual| over `count` uniform random (q, t) in the given box, seeded.
///
/// For the circular form t is drawn from (max(tmin, te), tmax].
ResidualSample sampleHjResidual(const ActionField& action, std::size_t count, std::uint64_t seed, Point qmin,
                                Point qmax, double tmin, double tmax, const Potential& potential = Potential::free());

}  // namespace bohmlab
