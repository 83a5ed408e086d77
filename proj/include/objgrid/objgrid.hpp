/*
 * Copyright The objgrid authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

// Core pipeline: trace ingest, synthetic workloads, analytics, grid layout.
// The HTTP facade lives in objgrid/api_service.hpp and pulls in cpp-httplib.
#include "objgrid/analytics.hpp"
#include "objgrid/gridviz.hpp"
#include "objgrid/trace_model.hpp"
#include "objgrid/workload_gen.hpp"
