#pragma once

// Test behaviors: two-qubit states measured along planar spin directions,
// plus a few synthetic boxes.
//
// Outcome index 0 is the +1 eigenvalue, index 1 is -1.

#include <random>
#include <vector>

#include "localdist/behavior.hpp"

namespace localdist {

struct TwoQubitState {
  enum class Kind { Pure, Werner };
  Kind kind = Kind::Pure;
  double param = 1.0;  // gamma for Pure, visibility p for Werner

  // (|00> + gamma |11>) / sqrt(1 + gamma^2), gamma in [0,1]
  static TwoQubitState pure(double gamma);
  // p |singlet><singlet| + (1 - p) 1/4, p in [0,1]
  static TwoQubitState werner(double p);
};

enum class Plane { XY, XZ };

struct MeasurementFamily {
  std::vector<double> angles;  // radians, one per setting
  Plane plane = Plane::XY;
};

// theta_k = k pi / M + offset, k = 0..M-1
MeasurementFamily planar_family(int M, Plane plane, double offset = 0.0);

// Offset used for Bob in the chained configuration.
double chained_offset(int M);

// Unit Bloch vector for an angle in a plane. XY: (cos, sin, 0);
// XZ: (cos, 0, sin).
std::vector<double> bloch_direction(double theta, Plane plane);

Behavior qubit_behavior(const TwoQubitState& state, const MeasurementFamily& alice,
                        const MeasurementFamily& bob);

// p(r,s|a,b) = 1/2 if r xor s == a*b, A=B=R=S=2.
Behavior pr_box();

// p = 1/(RS) everywhere.
Behavior uniform_behavior(const BehaviorDims& dims);

// Convex combination of k uniformly drawn vertices with flat Dirichlet weights.
Behavior random_local_mixture(const BehaviorDims& dims, int k, std::mt19937_64& rng);

}  // namespace localdist
