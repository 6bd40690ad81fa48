// Copyright 2026 The lownoise Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "lownoise/catalog.hpp"
#include "lownoise/channel.hpp"
#include "lownoise/channel_file.hpp"
#include "lownoise/errors.hpp"
#include "lownoise/fisher.hpp"
#include "lownoise/matrix.hpp"
#include "lownoise/optimize.hpp"
#include "lownoise/random.hpp"
#include "lownoise/series.hpp"
#include "lownoise/states.hpp"
#include "lownoise/version.hpp"
