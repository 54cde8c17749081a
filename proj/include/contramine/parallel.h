// Copyright 2026 The Contramine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONTRAMINE_PARALLEL_H_
#define CONTRAMINE_PARALLEL_H_

// Thread-count control for the OpenMP kernels. Every parallel kernel in the
// library has a `_serial` twin that the tests compare against and the
// benchmarks time.

namespace contramine::parallel {

int max_threads();

// n <= 0 leaves the OpenMP default in place.
void set_threads(int n);

}  // namespace contramine::parallel

#endif  // CONTRAMINE_PARALLEL_H_
