#pragma once

#include "zerocurve/canonical.hpp"
#include "zerocurve/diffpoly.hpp"
#include "zerocurve/errors.hpp"
#include "zerocurve/expr_text.hpp"
#include "zerocurve/grid.hpp"
#include "zerocurve/kdv.hpp"
#include "zerocurve/kdv_pde.hpp"
#include "zerocurve/lft.hpp"
#include "zerocurve/mfunction.hpp"
#include "zerocurve/obstruction.hpp"
#include "zerocurve/rational.hpp"
#include "zerocurve/spectrum.hpp"
#include "zerocurve/symbol.hpp"
#include "zerocurve/transfer.hpp"
#include "zerocurve/zpoly.hpp"
