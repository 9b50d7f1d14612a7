// Copyright 2026 The noknow Authors
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

// Column-stacking vectorization: vec(A X B) = (B^T (x) A) vec(X).

#ifndef NOKNOW_SUPEROPERATOR_HPP
#define NOKNOW_SUPEROPERATOR_HPP

#include "noknow/core.hpp"

namespace noknow::superop {

using Vector = Eigen::VectorXcd;

Vector vec(const Operator &m);
Operator unvec(const Vector &v, Eigen::Index dim);

/// X -> A X
Operator left(const Operator &a);
/// X -> X B
Operator right(const Operator &b);
/// X -> -i[H, X]
Operator commutator(const Operator &h);
/// X -> D[L] X
Operator dissipator(const Operator &l);
/// X -> A[Z] X = Z X + X Z^dagger
Operator innovation(const Operator &z);

}  // namespace noknow::superop

#endif  // NOKNOW_SUPEROPERATOR_HPP
