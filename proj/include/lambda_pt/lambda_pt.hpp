#pragma once

#include "lambda_pt/analysis.hpp"
#include "lambda_pt/errors.hpp"
#include "lambda_pt/evolve.hpp"
#include "lambda_pt/linalg3.hpp"
#include "lambda_pt/model.hpp"
#include "lambda_pt/oracle.hpp"
#include "lambda_pt/spectral.hpp"
