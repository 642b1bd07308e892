#pragma once

// Everything at once: group realization, exact arithmetic, the case scripts
// and the grid runner.

#include "noether/birational.hpp"
#include "noether/cases_common.hpp"
#include "noether/cases_odd.hpp"
#include "noether/cases_two.hpp"
#include "noether/certificate.hpp"
#include "noether/cyclotomic.hpp"
#include "noether/error.hpp"
#include "noether/expect.hpp"
#include "noether/fpgroups.hpp"
#include "noether/gates.hpp"
#include "noether/intmat.hpp"
#include "noether/monomial.hpp"
#include "noether/oracle.hpp"
#include "noether/regrep.hpp"
#include "noether/runner.hpp"
#include "noether/zmodule.hpp"
