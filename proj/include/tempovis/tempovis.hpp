#pragma once

#include "tempovis/charts.hpp"
#include "tempovis/density.hpp"
#include "tempovis/error.hpp"
#include "tempovis/ingest.hpp"
#include "tempovis/model.hpp"
#include "tempovis/numeric.hpp"
#include "tempovis/scene.hpp"
#include "tempovis/section_stats.hpp"
#include "tempovis/spline.hpp"
#include "tempovis/svg.hpp"
