#pragma once

#include <submet/format.hpp>
#include <submet/geometry.hpp>
#include <submet/manifold.hpp>
#include <submet/metrics.hpp>
#include <submet/mfd_io.hpp>
#include <submet/neighborhoods.hpp>
#include <submet/parallel.hpp>
#include <submet/scanning.hpp>
#include <submet/spatial.hpp>
#include <submet/svg.hpp>
