#pragma once
// Quadrotor rotor mixer: linear map from squared rotor speeds to total thrust
// and body torques, and its closed-form inverse with a feasibility flag.

#include <array>
#include <cmath>
#include <stdexcept>

namespace nocflow {

struct QuadParams {
  double b = 1.0;  // lift constant
  double d = 1.0;  // rotor arm length
  double k = 1.0;  // secondary lift constant

  void check() const {
    if (b <= 0.0 || d <= 0.0 || k <= 0.0)
      throw std::invalid_argument("mixer parameters must be positive");
  }
};

struct RotorCommand {
  std::array<double, 4> omega_sq{};  // squared angular velocities
  bool feasible = true;              // false when the solve needs negative omega^2
};

struct ThrustTorque {
  double thrust = 0.0;
  double torque_x = 0.0;
  double torque_y = 0.0;
  double torque_z = 0.0;
};

// Mixer matrix rows: [-b -b -b -b; 0 -db 0 db; -db 0 db 0; k -k k -k].
inline ThrustTorque mixer(const RotorCommand& w, const QuadParams& p) {
  p.check();
  const auto& o = w.omega_sq;
  ThrustTorque out;
  out.thrust = -p.b * (o[0] + o[1] + o[2] + o[3]);
  out.torque_x = p.d * p.b * (o[3] - o[1]);
  out.torque_y = p.d * p.b * (o[2] - o[0]);
  out.torque_z = p.k * (o[0] - o[1] + o[2] - o[3]);
  return out;
}

// Exact inverse of the 4x4 system. With s = -T/b, d1 = Gx/(db), d2 = Gy/(db),
// d3 = Gz/k: the even/odd rotor pair sums are u = (s+d3)/2 and v = (s-d3)/2,
// and each pair splits by its torque difference.
inline RotorCommand inverse_mixer(const ThrustTorque& tt, const QuadParams& p) {
  p.check();
  double s = -tt.thrust / p.b;
  double d1 = tt.torque_x / (p.d * p.b);
  double d2 = tt.torque_y / (p.d * p.b);
  double d3 = tt.torque_z / p.k;
  double u = (s + d3) / 2.0;  // omega1^2 + omega3^2
  double v = (s - d3) / 2.0;  // omega2^2 + omega4^2

  RotorCommand w;
  w.omega_sq[0] = (u - d2) / 2.0;
  w.omega_sq[2] = (u + d2) / 2.0;
  w.omega_sq[1] = (v - d1) / 2.0;
  w.omega_sq[3] = (v + d1) / 2.0;
  for (double o : w.omega_sq)
    if (o < 0.0) w.feasible = false;
  return w;
}

}  // namespace nocflow
