#pragma once

// Everything: network model, routing defender, jammer, detector, mitigation,
// experiment harness.

#include "xlayer/errors.hpp"
#include "xlayer/rng.hpp"
#include "xlayer/io.hpp"
#include "xlayer/netmodel.hpp"
#include "xlayer/defender.hpp"
#include "xlayer/attacker.hpp"
#include "xlayer/detection.hpp"
#include "xlayer/gf256.hpp"
#include "xlayer/mitigation.hpp"
#include "xlayer/harness.hpp"
