/*
 * Copyright 2026 The groupaug Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Everything in one include.

#include "groupaug/augmentation.hpp"
#include "groupaug/bo.hpp"
#include "groupaug/density.hpp"
#include "groupaug/errors.hpp"
#include "groupaug/evaluator.hpp"
#include "groupaug/fanova.hpp"
#include "groupaug/forest.hpp"
#include "groupaug/history.hpp"
#include "groupaug/image.hpp"
#include "groupaug/policies.hpp"
#include "groupaug/policy.hpp"
#include "groupaug/prior.hpp"
#include "groupaug/protocol.hpp"
#include "groupaug/report_io.hpp"
#include "groupaug/rng.hpp"
#include "groupaug/search.hpp"
#include "groupaug/search_space.hpp"
#include "groupaug/split.hpp"
