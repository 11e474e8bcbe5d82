// Copyright 2026 The Seqanon Authors
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

// Umbrella header.

#pragma once

#include "seqanon/activity.hpp"
#include "seqanon/anonymize.hpp"
#include "seqanon/clustering.hpp"
#include "seqanon/csv.hpp"
#include "seqanon/datagen.hpp"
#include "seqanon/dft.hpp"
#include "seqanon/error.hpp"
#include "seqanon/manifest.hpp"
#include "seqanon/matrix.hpp"
#include "seqanon/metrics.hpp"
#include "seqanon/pipeline.hpp"
#include "seqanon/rng.hpp"
#include "seqanon/stats.hpp"
