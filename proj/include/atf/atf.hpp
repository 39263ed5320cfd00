/**
 * @brief Umbrella header: exact orbital integrals, lattice counting, the Bruhat–Tits tree of
 * the unramified quadratic extension, intersection numbers and their verification.
 */
#pragma once

#include "atf/errors.hpp"
#include "atf/laurent.hpp"
#include "atf/galois.hpp"
#include "atf/series.hpp"
#include "atf/mat2.hpp"
#include "atf/quad.hpp"
#include "atf/lattice.hpp"
#include "atf/latcount.hpp"
#include "atf/orbital.hpp"
#include "atf/bttree.hpp"
#include "atf/artinian.hpp"
#include "atf/intersect.hpp"
#include "atf/atverify.hpp"
