#pragma once

// Shared fixtures for the unit tests and the acceptance runner.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cfsvp/lattice_core.hpp"
#include "cfsvp/trials.hpp"

namespace cfsvp::testing {

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }

inline ChannelInstance gaussian_channel(std::size_t n, double snr_db, std::uint64_t seed, std::uint64_t trial) {
  return ChannelInstance{sample_channel(n, seed, trial), db_to_power(snr_db)};
}

// Random t with |t| = radius in (0, 1), arbitrary signs and order.
inline std::vector<double> random_t(std::size_t n, double radius, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  std::vector<double> t(n);
  double norm2 = 0.0;
  for (auto& x : t) {
    x = normal(gen);
    norm2 += x * x;
  }
  for (auto& x : t) x *= radius / std::sqrt(norm2);
  return t;
}

inline Eigen::MatrixXd gram(const std::vector<double>& t) {
  const Eigen::Map<const Eigen::VectorXd> v(t.data(), static_cast<Eigen::Index>(t.size()));
  return Eigen::MatrixXd::Identity(v.size(), v.size()) - v * v.transpose();
}

inline bool rel_close(double a, double b, double rel) {
  return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b));
}

inline Coefficients negate(Coefficients a) {
  for (auto& x : a) x = -x;
  return a;
}

}  // namespace cfsvp::testing
