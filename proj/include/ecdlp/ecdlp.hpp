#pragma once

#include "ecdlp/bench.hpp"
#include "ecdlp/circuit.hpp"
#include "ecdlp/classical_ec.hpp"
#include "ecdlp/ec_circuit.hpp"
#include "ecdlp/error.hpp"
#include "ecdlp/gatelist.hpp"
#include "ecdlp/kaliski.hpp"
#include "ecdlp/modmath.hpp"
#include "ecdlp/montgomery.hpp"
#include "ecdlp/qarith.hpp"
#include "ecdlp/resources.hpp"
#include "ecdlp/shor.hpp"
#include "ecdlp/simulator.hpp"
#include "ecdlp/uncompute.hpp"
