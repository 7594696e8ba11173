/*
 * Copyright 2026 The Weldwave Authors
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

#include "weldwave/core/error.hpp"
#include "weldwave/core/grid.hpp"
#include "weldwave/core/rng.hpp"
#include "weldwave/core/units.hpp"
#include "weldwave/dataset/dataset.hpp"
#include "weldwave/dataset/params.hpp"
#include "weldwave/dataset/sample.hpp"
#include "weldwave/dataset/wfs.hpp"
#include "weldwave/dispersion/lamb.hpp"
#include "weldwave/dispersion/material.hpp"
#include "weldwave/em/effective_medium.hpp"
#include "weldwave/fem/helmholtz.hpp"
#include "weldwave/fem/mesh2d.hpp"
#include "weldwave/fem/sparse_lu.hpp"
#include "weldwave/nl/elastic3d.hpp"
#include "weldwave/wavefield/channels.hpp"
#include "weldwave/wavefield/corruption.hpp"
#include "weldwave/wavefield/filter.hpp"
#include "weldwave/wavefield/resample.hpp"
#include "weldwave/wavefield/scan.hpp"
#include "weldwave/wavefield/wavefield.hpp"
#include "weldwave/weld/crack.hpp"
#include "weldwave/weld/modulation.hpp"
#include "weldwave/weld/path.hpp"
#include "weldwave/weld/stiffness.hpp"
