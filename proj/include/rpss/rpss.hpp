#pragma once

#include "bench.hpp"
#include "broadword.hpp"
#include "capacity.hpp"
#include "codec.hpp"
#include "engine.hpp"
#include "freq.hpp"
#include "frequency_index.hpp"
#include "grammar.hpp"
#include "memory_accountant.hpp"
#include "packed_text.hpp"
#include "symbols.hpp"
#include "variants.hpp"
