#pragma once

#include "timersel/analysis.hpp"
#include "timersel/baseline.hpp"
#include "timersel/csv.hpp"
#include "timersel/model.hpp"
#include "timersel/numeric.hpp"
#include "timersel/rng.hpp"
#include "timersel/scheme1.hpp"
#include "timersel/scheme2.hpp"
#include "timersel/simulator.hpp"
#include "timersel/splitting_fixture.hpp"
#include "timersel/version.hpp"
