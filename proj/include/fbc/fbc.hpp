#pragma once

// Umbrella header for the whole toolkit.

#include "fbc/word.hpp"
#include "fbc/stallings.hpp"
#include "fbc/matrix.hpp"
#include "fbc/free_aut.hpp"
#include "fbc/fbc_group.hpp"
#include "fbc/subgroup.hpp"
#include "fbc/gog.hpp"
#include "fbc/twisted.hpp"
#include "fbc/cylinders.hpp"
#include "fbc/quad3.hpp"
#include "fbc/catalog.hpp"
#include "fbc/gbs.hpp"
#include "fbc/report.hpp"
#include "fbc/json_io.hpp"
