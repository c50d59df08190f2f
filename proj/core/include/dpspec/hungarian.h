// Copyright 2026 The dpspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPSPEC_HUNGARIAN_H_
#define DPSPEC_HUNGARIAN_H_

#include <vector>

#include <Eigen/Dense>

namespace dpspec {

struct Assignment {
  std::vector<int> row_to_col;  // row_to_col[r] = assigned column
  double cost = 0.0;
};

// Minimum-cost perfect matching on a square cost matrix (Kuhn-Munkres with
// potentials, O(k^3)).
Assignment SolveAssignment(const Eigen::MatrixXd& cost);

}  // namespace dpspec

#endif  // DPSPEC_HUNGARIAN_H_
