#pragma once

#include "spillscope/corpus.hpp"
#include "spillscope/display.hpp"
#include "spillscope/engine.hpp"
#include "spillscope/error.hpp"
#include "spillscope/metrics.hpp"
#include "spillscope/parser.hpp"
#include "spillscope/provenance.hpp"
#include "spillscope/registers.hpp"
#include "spillscope/report.hpp"
