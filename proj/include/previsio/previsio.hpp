#pragma once

// Everything at once.

#include "previsio/checkers.hpp"
#include "previsio/conglomerability.hpp"
#include "previsio/core.hpp"
#include "previsio/document.hpp"
#include "previsio/envelopes.hpp"
#include "previsio/extensions.hpp"
#include "previsio/gains.hpp"
#include "previsio/json_io.hpp"
#include "previsio/lp.hpp"
#include "previsio/oracle.hpp"
