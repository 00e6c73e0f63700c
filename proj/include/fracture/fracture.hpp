#pragma once

#include "fracture/bidegree.hpp"
#include "fracture/padic.hpp"
#include "fracture/pgroup.hpp"
#include "fracture/snf.hpp"
#include "fracture/module.hpp"
#include "fracture/monomial.hpp"
#include "fracture/presentation.hpp"
#include "fracture/presets.hpp"
#include "fracture/localization.hpp"
#include "fracture/assembler.hpp"
#include "fracture/periodicity.hpp"
#include "fracture/chart.hpp"
