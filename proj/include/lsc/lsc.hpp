#ifndef LSC_LSC_HPP
#define LSC_LSC_HPP

#include "lsc/error.hpp"
#include "lsc/vector_system.hpp"
#include "lsc/label_map.hpp"
#include "lsc/closest_center.hpp"
#include "lsc/labeled_search.hpp"
#include "lsc/projected.hpp"
#include "lsc/oracle.hpp"
#include "lsc/label_store.hpp"
#include "lsc/monitor.hpp"
#include "lsc/bench.hpp"

#endif  // LSC_LSC_HPP
