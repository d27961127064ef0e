#pragma once

#include "farey/classical.hpp"
#include "farey/constructor.hpp"
#include "farey/errors.hpp"
#include "farey/exact.hpp"
#include "farey/invariants.hpp"
#include "farey/io.hpp"
#include "farey/normalizer.hpp"
#include "farey/oracle.hpp"
#include "farey/symbol.hpp"
#include "farey/verify.hpp"
