#pragma once

#include "modinv/enumerate.hpp"
#include "modinv/fusion.hpp"
#include "modinv/invariants.hpp"
#include "modinv/io.hpp"
#include "modinv/modular_data.hpp"
#include "modinv/statistics.hpp"
#include "modinv/structure.hpp"
#include "modinv/types.hpp"
