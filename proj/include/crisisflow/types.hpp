#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace crisisflow {

using Index = Eigen::Index;
using Year = int;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad configuration (unknown key, wrong type, out-of-range value).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace crisisflow
