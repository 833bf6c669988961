#pragma once

#include "colmodel/errors.hpp"
#include "colmodel/qstate.hpp"
#include "colmodel/gates.hpp"
#include "colmodel/measures.hpp"
#include "colmodel/models.hpp"
#include "colmodel/nonmarkovianity.hpp"
#include "colmodel/config.hpp"
#include "colmodel/parallel.hpp"
#include "colmodel/sweep.hpp"
#include "colmodel/csv.hpp"
