/*
 * Copyright 2026 The Atria Authors.
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

#pragma once

// Analysis core. The HTTP binding (http_service.hpp) is left out so users
// who do not serve the API avoid pulling in the socket library.

#include "codelink.hpp"
#include "compare.hpp"
#include "errors.hpp"
#include "gentrace.hpp"
#include "graph.hpp"
#include "layout.hpp"
#include "metrics.hpp"
#include "payload.hpp"
#include "scene.hpp"
#include "store.hpp"
#include "svg.hpp"
#include "trace.hpp"
#include "api.hpp"
