#pragma once

#include "audit.hpp"
#include "complexalg.hpp"
#include "errors.hpp"
#include "formulas.hpp"
#include "golden.hpp"
#include "qfi.hpp"
#include "quantum.hpp"
#include "teleport.hpp"
