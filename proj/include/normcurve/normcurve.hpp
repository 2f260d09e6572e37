#pragma once

// Exact computation of normal-bundle splitting types of immersed rational
// curves, first-order deformation prediction, the Laurent-tail local model,
// and sampling surveys. Everything is header-only; include this to get the
// full library, or the individual headers to keep builds lean.

#include "normcurve/binform.hpp"
#include "normcurve/curve.hpp"
#include "normcurve/deform.hpp"
#include "normcurve/field.hpp"
#include "normcurve/io.hpp"
#include "normcurve/localmodel.hpp"
#include "normcurve/matrix.hpp"
#include "normcurve/parallel.hpp"
#include "normcurve/prime_field.hpp"
#include "normcurve/rational.hpp"
#include "normcurve/rng.hpp"
#include "normcurve/splitting.hpp"
#include "normcurve/strata.hpp"
