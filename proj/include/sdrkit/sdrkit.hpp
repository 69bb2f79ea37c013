#pragma once

#include "sdrkit/appraisal.hpp"
#include "sdrkit/cashflow.hpp"
#include "sdrkit/decimal.hpp"
#include "sdrkit/error.hpp"
#include "sdrkit/fiscal.hpp"
#include "sdrkit/rates.hpp"
#include "sdrkit/report.hpp"
#include "sdrkit/serialize.hpp"
#include "sdrkit/welfare.hpp"
