// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nogo/bounds.hpp"
#include "nogo/circuit.hpp"
#include "nogo/errors.hpp"
#include "nogo/ontology.hpp"
#include "nogo/qcore.hpp"
#include "nogo/rng.hpp"
#include "nogo/verifier.hpp"
