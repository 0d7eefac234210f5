#pragma once

// Umbrella header for the paramine bitext mining library.

#include "paramine/config.hpp"
#include "paramine/core.hpp"
#include "paramine/corpus_io.hpp"
#include "paramine/crawler.hpp"
#include "paramine/dictionary.hpp"
#include "paramine/docalign.hpp"
#include "paramine/error.hpp"
#include "paramine/features.hpp"
#include "paramine/filter.hpp"
#include "paramine/fixture.hpp"
#include "paramine/forest.hpp"
#include "paramine/html.hpp"
#include "paramine/ibm1.hpp"
#include "paramine/langid.hpp"
#include "paramine/pipeline.hpp"
#include "paramine/report.hpp"
#include "paramine/rng.hpp"
#include "paramine/sentalign.hpp"
#include "paramine/sentsplit.hpp"
#include "paramine/url.hpp"
#include "paramine/webdoc.hpp"
