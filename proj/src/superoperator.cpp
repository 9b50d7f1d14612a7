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

#include "noknow/superoperator.hpp"

namespace noknow::superop {

Vector vec(const Operator &m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Operator unvec(const Vector &v, Eigen::Index dim) {
    if (v.size() != dim * dim) throw DimensionError("unvec: vector length is not dim^2");
    return Eigen::Map<const Operator>(v.data(), dim, dim);
}

Operator left(const Operator &a) {
    return kron(Operator::Identity(a.rows(), a.cols()), a);
}

Operator right(const Operator &b) {
    return kron(b.transpose(), Operator::Identity(b.rows(), b.cols()));
}

Operator commutator(const Operator &h) { return -kI * (left(h) - right(h)); }

Operator dissipator(const Operator &l) {
    const Operator ldl = l.adjoint() * l;
    return kron(l.conjugate(), l) - 0.5 * (left(ldl) + right(ldl));
}

Operator innovation(const Operator &z) { return left(z) + right(z.adjoint()); }

}  // namespace noknow::superop
