#pragma once

#include "mvmdp/average_cost.hpp"
#include "mvmdp/errors.hpp"
#include "mvmdp/global_search.hpp"
#include "mvmdp/interval_set.hpp"
#include "mvmdp/inventory.hpp"
#include "mvmdp/io.hpp"
#include "mvmdp/mdp.hpp"
#include "mvmdp/pseudo.hpp"
#include "mvmdp/sensitivity.hpp"
