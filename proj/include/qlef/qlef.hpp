#pragma once

#include <qlef/cohom.hpp>
#include <qlef/errors.hpp>
#include <qlef/invariants.hpp>
#include <qlef/json_io.hpp>
#include <qlef/linalg.hpp>
#include <qlef/mirror.hpp>
#include <qlef/oracle.hpp>
#include <qlef/rational.hpp>
#include <qlef/series.hpp>
#include <qlef/twist.hpp>
