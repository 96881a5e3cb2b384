#pragma once

#include "skillmatch/errors.hpp"
#include "skillmatch/type_set.hpp"
#include "skillmatch/model.hpp"
#include "skillmatch/model_io.hpp"
#include "skillmatch/states.hpp"
#include "skillmatch/product_form.hpp"
#include "skillmatch/nsystem.hpp"
#include "skillmatch/partial_balance.hpp"
#include "skillmatch/event_stream.hpp"
#include "skillmatch/transitions.hpp"
#include "skillmatch/stats.hpp"
#include "skillmatch/simulate.hpp"
#include "skillmatch/coupling.hpp"
#include "skillmatch/infinite_matching.hpp"
