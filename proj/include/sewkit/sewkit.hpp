#pragma once

#include "sewkit/rational.hpp"
#include "sewkit/linalg.hpp"
#include "sewkit/laurent.hpp"
#include "sewkit/coord_jet.hpp"
#include "sewkit/trunc_series.hpp"
#include "sewkit/partitions.hpp"
#include "sewkit/fock.hpp"
#include "sewkit/u_operator.hpp"
#include "sewkit/module.hpp"
#include "sewkit/schwarzian.hpp"
#include "sewkit/sewing.hpp"
#include "sewkit/fuchs.hpp"
#include "sewkit/series_json.hpp"
#include "sewkit/bundle_json.hpp"
#include "sewkit/random.hpp"
