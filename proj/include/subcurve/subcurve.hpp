// Copyright 2026 The subcurve Authors.
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

#pragma once

#include "subcurve/boundary.hpp"
#include "subcurve/feature_model.hpp"
#include "subcurve/ho_mesh.hpp"
#include "subcurve/interpolation.hpp"
#include "subcurve/io/gmsh.hpp"
#include "subcurve/io/json_io.hpp"
#include "subcurve/io/vtu.hpp"
#include "subcurve/limit_eval.hpp"
#include "subcurve/mesh.hpp"
#include "subcurve/meshgen.hpp"
#include "subcurve/metrics.hpp"
#include "subcurve/nodes.hpp"
#include "subcurve/simplex.hpp"
#include "subcurve/subdivision.hpp"
#include "subcurve/volume.hpp"
