#pragma once

#include "corrtree/bootstrap.hpp"
#include "corrtree/clustering.hpp"
#include "corrtree/correlation.hpp"
#include "corrtree/dendrogram.hpp"
#include "corrtree/disjoint_set.hpp"
#include "corrtree/error.hpp"
#include "corrtree/graph.hpp"
#include "corrtree/panel.hpp"
#include "corrtree/pipeline.hpp"
#include "corrtree/report.hpp"
#include "corrtree/version.hpp"
