// Copyright 2026 The pwn Authors
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

#ifndef PWN_PWN_HPP_
#define PWN_PWN_HPP_

#include "pwn/calculus.hpp"
#include "pwn/chaos.hpp"
#include "pwn/charlier.hpp"
#include "pwn/model.hpp"
#include "pwn/montecarlo.hpp"
#include "pwn/multiset.hpp"
#include "pwn/symtensor.hpp"
#include "pwn/wick.hpp"

#endif  // PWN_PWN_HPP_
