//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_MATRIX_H_
#define COLDDTI_MATRIX_H_

#include <Eigen/Dense>

namespace colddti {

// Structures are stored as rows: an n x d matrix holds n d-vectors.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace colddti

#endif  // COLDDTI_MATRIX_H_
