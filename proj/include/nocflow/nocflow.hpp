#pragma once
// Umbrella header: the whole trace -> DDG -> curvature partition -> mesh
// mapping -> wormhole simulation -> energy report flow.

#include "nocflow/arch.hpp"
#include "nocflow/config.hpp"
#include "nocflow/curvature.hpp"
#include "nocflow/ddg.hpp"
#include "nocflow/dot.hpp"
#include "nocflow/json_io.hpp"
#include "nocflow/mapping.hpp"
#include "nocflow/mixer.hpp"
#include "nocflow/partition.hpp"
#include "nocflow/pipeline.hpp"
#include "nocflow/sim.hpp"
#include "nocflow/task_graph.hpp"
#include "nocflow/trace.hpp"
#include "nocflow/workload.hpp"
