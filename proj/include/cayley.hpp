#pragma once

#include <cayley/bounds.hpp>
#include <cayley/cascade.hpp>
#include <cayley/decomposition.hpp>
#include <cayley/deviation.hpp>
#include <cayley/dissociation.hpp>
#include <cayley/error.hpp>
#include <cayley/group.hpp>
#include <cayley/harness.hpp>
#include <cayley/random.hpp>
#include <cayley/rational.hpp>
#include <cayley/report.hpp>
#include <cayley/setops.hpp>
#include <cayley/subset.hpp>
