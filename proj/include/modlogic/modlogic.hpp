#pragma once

#include "modlogic/core.hpp"
#include "modlogic/generators.hpp"
#include "modlogic/idl.hpp"
#include "modlogic/mdl.hpp"
#include "modlogic/reductions.hpp"
