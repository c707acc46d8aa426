#pragma once

#include <string>

#include <Eigen/Core>

namespace otto {

/// Shortest decimal string that parses back to exactly `x`
/// ("nan", "inf", "-inf" for non-finite values).
std::string format_double(double x);

/// Row-major "[[a, b], [c, d]]" rendering with round-trip precision.
std::string format_matrix(const Eigen::Ref<const Eigen::MatrixXd>& m);

/// RFC 4180 field: quoted when it contains a comma, quote or line break.
std::string csv_field(const std::string& s);

}  // namespace otto
