#pragma once

// netdens: planning and simulation toolkit for decentralized SGD over
// wireless networks. Radio propagation -> gossip matrix construction ->
// transmission-rate optimization -> training simulation.

#include "netdens/bound.hpp"
#include "netdens/channel.hpp"
#include "netdens/config.hpp"
#include "netdens/consensus.hpp"
#include "netdens/csv.hpp"
#include "netdens/dataset.hpp"
#include "netdens/dpsgd.hpp"
#include "netdens/errors.hpp"
#include "netdens/layout.hpp"
#include "netdens/model.hpp"
#include "netdens/optimizer.hpp"
#include "netdens/radio.hpp"
#include "netdens/rng.hpp"
#include "netdens/scenario.hpp"
#include "netdens/version.hpp"
