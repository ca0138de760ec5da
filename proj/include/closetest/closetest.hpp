// Copyright 2026 The closetest Authors
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

#ifndef CLOSETEST_CLOSETEST_HPP_
#define CLOSETEST_CLOSETEST_HPP_

#include "closetest/csv.hpp"
#include "closetest/distribution.hpp"
#include "closetest/experiments.hpp"
#include "closetest/markov.hpp"
#include "closetest/moments.hpp"
#include "closetest/parallel.hpp"
#include "closetest/random.hpp"
#include "closetest/statistics.hpp"
#include "closetest/tester.hpp"

#endif  // CLOSETEST_CLOSETEST_HPP_
