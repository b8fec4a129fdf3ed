#pragma once

#include "cavent/evolve.hpp"
#include "cavent/hilbert.hpp"
#include "cavent/model.hpp"
#include "cavent/observe.hpp"
#include "cavent/oracle.hpp"
#include "cavent/runner.hpp"
