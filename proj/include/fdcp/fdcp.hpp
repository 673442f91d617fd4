#pragma once

#include "fdcp/errors.hpp"
#include "fdcp/random.hpp"
#include "fdcp/normal.hpp"
#include "fdcp/renewal.hpp"
#include "fdcp/event_io.hpp"
#include "fdcp/window.hpp"
#include "fdcp/theory.hpp"
#include "fdcp/filtered_derivative.hpp"
#include "fdcp/ks.hpp"
#include "fdcp/parallel.hpp"
#include "fdcp/detector.hpp"
#include "fdcp/lab.hpp"
