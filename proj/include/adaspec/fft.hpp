#pragma once

#include <Eigen/Dense>

namespace adaspec {

// Plain (unnormalized) DFT. forward([1,0,0,0]) == [1,1,1,1].
Eigen::VectorXcd dft_forward(const Eigen::VectorXcd& buffer);

// Inverse with the 1/N factor, so dft_inverse(dft_forward(x)) == x up to
// rounding and Parseval holds as sum|x|^2 == (1/N) sum|X|^2.
Eigen::VectorXcd dft_inverse(const Eigen::VectorXcd& buffer);

}  // namespace adaspec
