#pragma once

#include "vekua/config.hpp"
#include "vekua/ellsys.hpp"
#include "vekua/errors.hpp"
#include "vekua/expr.hpp"
#include "vekua/gcnum.hpp"
#include "vekua/jet.hpp"
#include "vekua/rewrite.hpp"
#include "vekua/verify.hpp"
