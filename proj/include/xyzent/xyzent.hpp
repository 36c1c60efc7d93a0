#pragma once

#include "criticality.hpp"
#include "entanglement.hpp"
#include "errors.hpp"
#include "matrix4.hpp"
#include "model.hpp"
#include "sweep.hpp"
#include "thermal.hpp"
#include "verify.hpp"
