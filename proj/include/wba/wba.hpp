/*
 * Copyright 2026 The WBA Toolkit Authors.
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

// Umbrella header for the whole toolkit.

#include "wba/analysis.hpp"
#include "wba/confusion.hpp"
#include "wba/error.hpp"
#include "wba/io.hpp"
#include "wba/loss.hpp"
#include "wba/metrics.hpp"
#include "wba/profile.hpp"
#include "wba/weights.hpp"
