/*
 * Copyright 2026 The TPA Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TPA_TPA_HPP
#define TPA_TPA_HPP

#include "tpa/automata.hpp"
#include "tpa/equivalence.hpp"
#include "tpa/error.hpp"
#include "tpa/io.hpp"
#include "tpa/label.hpp"
#include "tpa/model.hpp"
#include "tpa/observation.hpp"
#include "tpa/opacity.hpp"
#include "tpa/parser.hpp"
#include "tpa/predicate.hpp"
#include "tpa/semantics.hpp"
#include "tpa/supervisor.hpp"
#include "tpa/term.hpp"

#endif  // TPA_TPA_HPP
