#pragma once
// Synthetic workload generator: emits an instruction trace for a PD control
// loop driving a rotor-mixer chain. The trace is pure text in the grammar
// accepted by parse_trace(); structure is fixed, per-step gain constants are
// drawn from a seeded deterministic generator so distinct seeds give distinct
// but reproducible traces.

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace nocflow {

// Trace shape: fixed preamble, a fixed number of lines per control step, and
// a one-line epilogue. Exposed so tests and users can index into steps.
inline constexpr int kPdPreambleLines = 7;
inline constexpr int kPdStepLines = 21;
inline constexpr int kPdEpilogueLines = 1;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform double in [0.5, 1.5), fully determined by the generator state.
inline double gain_constant(std::uint64_t& state) {
  double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
  return 0.5 + u;
}

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// Generate a PD-controller trace with `steps` loop iterations.
//
// Each step loads the measurement, setpoint and previous error, computes the
// proportional and derivative terms, folds them into a thrust command, runs a
// small mixer chain producing four rotor values, stores the loop-carried
// state, and branches on a bounds check. The two per-step mixer gains come
// from the seed.
inline std::string gen_pd_trace(int steps, std::uint64_t seed) {
  if (steps < 1) throw std::invalid_argument("step count must be at least 1");
  std::uint64_t state = seed;
  std::string out;
  out.reserve(static_cast<std::size_t>(steps) * 1024 + 512);

  // State cells: %st = previous error, %sp = setpoint, %ms = measurement.
  out += "%st = alloca double, align 8\n";
  out += "%sp = alloca double, align 8\n";
  out += "%ms = alloca double, align 8\n";
  out += "store double 1.5, double* %sp, align 8\n";
  out += "store double 0.0, double* %st, align 8\n";
  out += "store double 0.25, double* %ms, align 8\n";
  out += "br label %loop\n";

  for (int s = 0; s < steps; ++s) {
    const std::string i = std::to_string(s);
    const std::string c1 = detail::fmt_double(detail::gain_constant(state));
    const std::string c2 = detail::fmt_double(detail::gain_constant(state));

    out += "%m" + i + " = load double, double* %ms, align 8\n";
    out += "%r" + i + " = load double, double* %sp, align 8\n";
    out += "%e" + i + " = fsub double %r" + i + ", %m" + i + "\n";
    out += "%pv" + i + " = load double, double* %st, align 8\n";
    out += "%de" + i + " = fsub double %e" + i + ", %pv" + i + "\n";
    out += "%dd" + i + " = fdiv double %de" + i + ", 0.01\n";
    out += "%up" + i + " = fmul double %e" + i + ", 4.5\n";
    out += "%ud" + i + " = fmul double %dd" + i + ", 0.8\n";
    out += "%u" + i + " = fadd double %up" + i + ", %ud" + i + "\n";
    out += "%t" + i + " = fmul double %u" + i + ", -1.0\n";
    out += "%a1" + i + " = fadd double %t" + i + ", %u" + i + "\n";
    out += "%a2" + i + " = fsub double %t" + i + ", %u" + i + "\n";
    out += "%w1" + i + " = fdiv double %a1" + i + ", 2.0\n";
    out += "%w2" + i + " = fdiv double %a2" + i + ", 2.0\n";
    out += "%w3" + i + " = fmul double %w1" + i + ", " + c1 + "\n";
    out += "%w4" + i + " = fmul double %w2" + i + ", " + c2 + "\n";
    out += "store double %e" + i + ", double* %st, align 8\n";
    out += "store double %w3" + i + ", double* %ms, align 8\n";
    out += "%ck" + i + " = fadd double %w3" + i + ", %w4" + i + "\n";
    out += "%cm" + i + " = fcmp olt double %ck" + i + ", 100.0\n";
    out += "br i1 %cm" + i + ", label %loop, label %exit\n";
  }

  out += "ret void\n";
  return out;
}

}  // namespace nocflow
