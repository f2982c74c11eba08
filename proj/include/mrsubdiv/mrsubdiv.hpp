#pragma once

#include "mrsubdiv/cascade.hpp"
#include "mrsubdiv/errors.hpp"
#include "mrsubdiv/gramian.hpp"
#include "mrsubdiv/mask.hpp"
#include "mrsubdiv/mra.hpp"
#include "mrsubdiv/operators.hpp"
#include "mrsubdiv/stencil.hpp"
#include "mrsubdiv/verify.hpp"
