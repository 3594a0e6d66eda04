// numerics/tensor.cc

// Copyright 2026  The sparch authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "sparch/numerics/tensor.h"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "sparch/base/error.h"

namespace sparch {

namespace internal {

std::vector<double> &TensorNode::MutableGrad() {
  if (grad.empty()) grad.assign(value.size(), 0.0);
  return grad;
}

}  // namespace internal

namespace {
thread_local bool t_grad_enabled = true;
}  // namespace

bool GradEnabled() { return t_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(t_grad_enabled) { t_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { t_grad_enabled = previous_; }

size_t ShapeSize(const Shape &shape) {
  size_t n = 1;
  for (int d : shape) n *= static_cast<size_t>(d);
  return n;
}

std::string ShapeString(const Shape &shape) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
  os << ']';
  return os.str();
}

Tensor Tensor::Zeros(const Shape &shape, bool requires_grad) {
  return FromData(shape, std::vector<double>(ShapeSize(shape), 0.0), requires_grad);
}

Tensor Tensor::FromData(const Shape &shape, std::vector<double> data, bool requires_grad) {
  for (int d : shape)
    if (d <= 0) SPARCH_ERR(kDimension) << "non-positive extent in shape " << ShapeString(shape);
  if (shape.empty()) SPARCH_ERR(kDimension) << "empty shape";
  if (data.size() != ShapeSize(shape))
    SPARCH_ERR(kDimension) << "data length " << data.size() << " does not match shape "
                           << ShapeString(shape);
  auto node = std::make_shared<internal::TensorNode>();
  node->shape = shape;
  node->value = std::move(data);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::Scalar(double value) { return FromData({1}, {value}); }

Tensor Tensor::FromMatrix(const Matrix &m) { return FromData({m.rows, m.cols}, m.data); }

int Tensor::rows() const {
  if (rank() == 1) return 1;
  if (rank() == 2) return dim(0);
  SPARCH_ERR(kDimension) << "matrix view of rank-" << rank() << " tensor";
}

int Tensor::cols() const {
  if (rank() == 1) return dim(0);
  if (rank() == 2) return dim(1);
  SPARCH_ERR(kDimension) << "matrix view of rank-" << rank() << " tensor";
}

double Tensor::item() const {
  if (size() != 1) SPARCH_ERR(kDimension) << "item() on tensor of shape " << ShapeString(shape());
  return node_->value[0];
}

double Tensor::at(int r, int c) const {
  return node_->value[static_cast<size_t>(r) * cols() + c];
}

std::span<const double> Tensor::grad() const { return node_->MutableGrad(); }

void Tensor::ZeroGrad() {
  if (!node_->grad.empty()) std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

Tensor Tensor::Clone() const { return FromData(shape(), node_->value, requires_grad()); }

Matrix Tensor::ToMatrix() const {
  Matrix m(rows(), cols());
  m.data = node_->value;
  return m;
}

void Tensor::Backward() {
  if (size() != 1)
    SPARCH_ERR(kDimension) << "Backward() needs a scalar, got " << ShapeString(shape());
  if (!requires_grad()) return;

  // Iterative post-order DFS gives a topological order (inputs first).
  std::vector<internal::TensorNode *> order;
  std::unordered_set<internal::TensorNode *> visited;
  std::vector<std::pair<internal::TensorNode *, size_t>> stack;
  stack.emplace_back(node_.get(), 0);
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto &[node, next] = stack.back();
    if (next < node->inputs.size()) {
      internal::TensorNode *child = node->inputs[next++].get();
      if (child->requires_grad && visited.insert(child).second) stack.emplace_back(child, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  node_->MutableGrad()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    internal::TensorNode *node = *it;
    if (node->backward && !node->grad.empty()) node->backward(*node);
  }
  for (internal::TensorNode *node : order) {
    if (!node->inputs.empty()) {
      node->inputs.clear();
      node->backward = nullptr;
    }
  }
}

Parameter::Parameter(std::string name, Tensor tensor)
    : name_(std::move(name)), tensor_(std::move(tensor)) {
  tensor_.set_requires_grad(true);
}

Parameter::Parameter(const Parameter &other)
    : name_(other.name_),
      tensor_(other.tensor_.defined() ? other.tensor_.Clone() : Tensor()),
      frozen_(other.frozen_) {}

Parameter &Parameter::operator=(const Parameter &other) {
  if (this != &other) {
    name_ = other.name_;
    tensor_ = other.tensor_.defined() ? other.tensor_.Clone() : Tensor();
    frozen_ = other.frozen_;
  }
  return *this;
}

void Parameter::set_frozen(bool frozen) {
  frozen_ = frozen;
  tensor_.set_requires_grad(!frozen);
  if (frozen) tensor_.ZeroGrad();
}

}  // namespace sparch
