/* Copyright 2026 the rwndqsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rwndqsim/endhost/apps.hpp"

namespace rwndqsim::endhost {

void MiceSession::start() {
  started_ = true;
  if (params_.request_count > 0) {
    begin_request();
  }
}

void MiceSession::begin_request() {
  started_at_ = env_.now();
  in_flight_ = true;
  auto [client, server] =
      env_.open_connection(params_.client_host, params_.server_host);

  // The server side answers the completed request with the configured
  // response and closes first, HTTP/1.0 style.
  TcpHalf* server_half = server;
  server->on_deliver = [this, server_half,
                        responded = false](uint64_t total) mutable {
    if (!responded && total >= params_.request_bytes) {
      responded = true;
      server_half->app_supply(params_.response_bytes);
      server_half->app_close(env_.now());
    }
  };

  client->on_closed = [this] { finish_request(true); };
  client->on_dead = [this] { finish_request(false); };

  client->app_supply(params_.request_bytes);
  client->open_active(env_.now());
  env_.activate(client);
}

void MiceSession::finish_request(bool completed) {
  if (!in_flight_) {
    return;
  }
  in_flight_ = false;
  FctRecord rec;
  rec.client_id = params_.client_id;
  rec.request_idx = next_idx_;
  rec.completed = completed;
  rec.fct_us = completed ? env_.now() - started_at_ : kFctNeverFinished;
  sink_.push_back(rec);
  next_idx_ += 1;
  if (next_idx_ < params_.request_count) {
    begin_request();
  }
}

}  // namespace rwndqsim::endhost
