//! HTTP/JSON routes.
//!
//! Every route except registration, the pack and the top list needs an
//! `Authorization: Bearer <token>` header carrying the token returned by
//! `POST /api/players`. Errors are `{"error_code": ..., "message": ...}`
//! with a 4xx status for rejected requests and 5xx for storage failures.

use std::collections::HashMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::{JsonRejection, PathRejection, QueryRejection};
use axum::extract::{FromRequestParts, Path, Query, State};
use axum::http::request::Parts;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use entrexplorer_core::business_plan::{BusinessPlan, Completeness, PlanError};
use entrexplorer_core::content_pack::{ContentPack, Exercise};
use entrexplorer_core::market_sim::{
    BalanceSheet, Decision, MarketError, MarketState, SimulationOutcome, TurnResult, VentureConfig,
};
use entrexplorer_core::minigames::{
    new_classification_round, score_classification, score_ordering, seeded_shuffle,
    MinigameError, RoundScore,
};
use entrexplorer_core::progression::{
    Answer, HistoryRow, LevelAttempt, ProfileReport, ProfileResponse, ProgressionError,
    ProgressionRules,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::chat::ChatMessage;
use crate::error::StoreError;
use crate::store::{now_millis, ActiveMarket, MarketSummary, PlayerRecord, Store};

pub struct AppInner {
    pub pack: ContentPack,
    pub store: Store,
    pub rules: ProgressionRules,
    pub server_seed: u64,
}

pub type AppState = Arc<AppInner>;

pub fn app_state(pack: ContentPack, store: Store, server_seed: u64) -> AppState {
    Arc::new(AppInner {
        pack,
        store,
        rules: ProgressionRules::default(),
        server_seed,
    })
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/players", post(register))
        .route("/api/pack", get(pack))
        .route("/api/progress", get(progress))
        .route("/api/levels/{n}/attempts", post(submit_attempt))
        .route("/api/history", get(history))
        .route("/api/profile", post(profile))
        .route("/api/plan", get(get_plan).put(put_plan))
        .route("/api/plan/sections/{key}", get(get_section).put(put_section))
        .route("/api/plan/export", get(export_plan))
        .route("/api/exercises/{id}/round", get(exercise_round))
        .route("/api/exercises/{id}/score", post(exercise_score))
        .route("/api/market", get(market))
        .route("/api/market/start", post(market_start))
        .route("/api/market/turn", post(market_turn))
        .route("/api/toplist", get(toplist))
        .route("/api/chat/{room}", get(list_chat).post(post_chat))
        .with_state(state)
}

/// Seed of a player's `run`-th simulation: the first eight bytes of
/// SHA-256 over the server seed, the player id and the run index.
pub fn derive_seed(server_seed: u64, player_id: &str, run: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(server_seed.to_le_bytes());
    h.update(player_id.as_bytes());
    h.update(run.to_le_bytes());
    let digest = h.finalize();
    let mut first = [0u8; 8];
    first.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(first)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error_code: String,
    pub message: String,
}

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            code,
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            error_code: self.code.to_owned(),
            message: self.message,
        };
        (self.status, Json(body)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        let (status, code) = match &e {
            StoreError::Storage(_) => (StatusCode::INTERNAL_SERVER_ERROR, "storage_error"),
            StoreError::UnknownPlayer(_) => (StatusCode::NOT_FOUND, "unknown_player"),
            StoreError::NotSuccessful => (StatusCode::CONFLICT, "not_successful"),
            StoreError::EmptyBody => (StatusCode::UNPROCESSABLE_ENTITY, "empty_body"),
            StoreError::BodyTooLong(_) => (StatusCode::UNPROCESSABLE_ENTITY, "body_too_long"),
            StoreError::InvalidRoom(_) => (StatusCode::UNPROCESSABLE_ENTITY, "invalid_room"),
            StoreError::InvalidDisplayName => {
                (StatusCode::UNPROCESSABLE_ENTITY, "invalid_display_name")
            }
        };
        Self::new(status, code, e.to_string())
    }
}

impl From<ProgressionError> for ApiError {
    fn from(e: ProgressionError) -> Self {
        let (status, code) = match &e {
            ProgressionError::UnknownLevel(_) => (StatusCode::NOT_FOUND, "unknown_level"),
            ProgressionError::LevelLocked(_) => (StatusCode::FORBIDDEN, "level_locked"),
            ProgressionError::IncompleteAnswers { .. } => {
                (StatusCode::UNPROCESSABLE_ENTITY, "incomplete_answers")
            }
            ProgressionError::InvalidChoice { .. } => {
                (StatusCode::UNPROCESSABLE_ENTITY, "invalid_choice")
            }
            ProgressionError::IncompleteResponses { .. } => {
                (StatusCode::UNPROCESSABLE_ENTITY, "incomplete_responses")
            }
            ProgressionError::RatingOutOfRange { .. } => {
                (StatusCode::UNPROCESSABLE_ENTITY, "rating_out_of_range")
            }
        };
        Self::new(status, code, e.to_string())
    }
}

impl From<PlanError> for ApiError {
    fn from(e: PlanError) -> Self {
        Self::new(StatusCode::NOT_FOUND, "unknown_section", e.to_string())
    }
}

impl From<MarketError> for ApiError {
    fn from(e: MarketError) -> Self {
        let (status, code) = match &e {
            MarketError::Domain(_) => (StatusCode::UNPROCESSABLE_ENTITY, "domain_error"),
            MarketError::InvalidConfig(_) => (StatusCode::UNPROCESSABLE_ENTITY, "invalid_config"),
            MarketError::InvalidDecision(_) => {
                (StatusCode::UNPROCESSABLE_ENTITY, "invalid_decision")
            }
            MarketError::SimulationOver => (StatusCode::CONFLICT, "simulation_over"),
            MarketError::AlreadyBankrupt => (StatusCode::CONFLICT, "already_bankrupt"),
            MarketError::NoDecisions => (StatusCode::UNPROCESSABLE_ENTITY, "no_decisions"),
        };
        Self::new(status, code, e.to_string())
    }
}

impl From<MinigameError> for ApiError {
    fn from(e: MinigameError) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid_placement", e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", e.body_text())
    }
}

impl From<PathRejection> for ApiError {
    fn from(e: PathRejection) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", e.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", e.body_text())
    }
}

type ApiResult<T> = Result<T, ApiError>;
type Body<T> = Result<Json<T>, JsonRejection>;

/// The player identified by the request's bearer token.
pub struct Authed(pub String);

impl FromRequestParts<AppState> for Authed {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &AppState) -> Result<Self, ApiError> {
        let unauthorized =
            |msg: &str| ApiError::new(StatusCode::UNAUTHORIZED, "unauthorized", msg);
        let value = parts
            .headers
            .get(header::AUTHORIZATION)
            .ok_or_else(|| unauthorized("missing bearer token"))?
            .to_str()
            .map_err(|_| unauthorized("malformed authorization header"))?;
        let token = value
            .strip_prefix("Bearer ")
            .ok_or_else(|| unauthorized("expected a bearer token"))?
            .trim();
        state
            .store
            .player_for_token(token)
            .map(Authed)
            .ok_or_else(|| unauthorized("unknown session token"))
    }
}

/// Runs blocking store work off the async executor.
async fn blocking<T, F>(state: &AppState, f: F) -> ApiResult<T>
where
    T: Send + 'static,
    F: FnOnce(&AppInner) -> ApiResult<T> + Send + 'static,
{
    let state = state.clone();
    tokio::task::spawn_blocking(move || f(&state))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
}

#[derive(Debug, Deserialize)]
pub struct RegisterRequest {
    pub display_name: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RegisterResponse {
    pub player_id: String,
    pub token: String,
    pub display_name: String,
}

async fn register(
    State(state): State<AppState>,
    body: Body<RegisterRequest>,
) -> ApiResult<(StatusCode, Json<RegisterResponse>)> {
    let Json(req) = body?;
    let record = blocking(&state, move |s| Ok(s.store.register(&req.display_name, &s.pack)?)).await?;
    Ok((
        StatusCode::CREATED,
        Json(RegisterResponse {
            player_id: record.player_id,
            token: record.token,
            display_name: record.display_name,
        }),
    ))
}

async fn pack(State(state): State<AppState>) -> Json<serde_json::Value> {
    Json(state.pack.public_view())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LevelStatus {
    pub number: u32,
    pub title: String,
    pub unlocked: bool,
    pub passed: bool,
    pub best_score: Option<u8>,
    pub attempts: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ProgressView {
    pub player_id: String,
    pub display_name: String,
    pub learning_score: f64,
    pub levels: Vec<LevelStatus>,
    pub profile: Option<ProfileReport>,
}

fn progress_view(pack: &ContentPack, record: &PlayerRecord) -> ProgressView {
    let p = &record.progress;
    let levels = pack
        .levels
        .iter()
        .map(|level| {
            let attempts = p.attempts_for(level.number);
            LevelStatus {
                number: level.number,
                title: level.title.clone(),
                unlocked: p.is_level_unlocked(level.number),
                passed: p.has_passed(level.number),
                best_score: attempts.iter().map(|a| a.score).max(),
                attempts: attempts.len(),
            }
        })
        .collect();
    ProgressView {
        player_id: record.player_id.clone(),
        display_name: record.display_name.clone(),
        learning_score: p.learning_score().value,
        levels,
        profile: p.profile.clone(),
    }
}

async fn progress(State(state): State<AppState>, Authed(id): Authed) -> ApiResult<Json<ProgressView>> {
    let record = state.store.player(&id)?;
    Ok(Json(progress_view(&state.pack, &record)))
}

#[derive(Debug, Deserialize)]
pub struct AttemptRequest {
    pub answers: Vec<Answer>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct QuestionResult {
    pub question_id: String,
    pub chosen_index: usize,
    pub correct_index: usize,
    pub was_correct: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AttemptResponse {
    #[serde(flatten)]
    pub attempt: LevelAttempt,
    pub questions: Vec<QuestionResult>,
    pub learning_score: f64,
}

async fn submit_attempt(
    State(state): State<AppState>,
    Authed(id): Authed,
    level: Result<Path<u32>, PathRejection>,
    body: Body<AttemptRequest>,
) -> ApiResult<Json<AttemptResponse>> {
    let Path(level) = level?;
    let Json(req) = body?;
    let out = blocking(&state, move |s| {
        s.store.update_player(&id, |rec| -> ApiResult<_> {
            let attempt = rec
                .progress
                .submit_assessment(&s.pack, level, &req.answers, &s.rules)?;
            Ok((attempt, rec.progress.learning_score().value))
        })
    })
    .await?;
    let (attempt, learning_score) = out;
    let quiz = &state.pack.level(level).expect("attempt implies level").quiz;
    let questions = attempt
        .answers
        .iter()
        .zip(quiz)
        .map(|(a, q)| QuestionResult {
            question_id: a.question_id.clone(),
            chosen_index: a.chosen_index,
            correct_index: q.correct_index,
            was_correct: a.chosen_index == q.correct_index,
        })
        .collect();
    Ok(Json(AttemptResponse {
        attempt,
        questions,
        learning_score,
    }))
}

async fn history(State(state): State<AppState>, Authed(id): Authed) -> ApiResult<Json<Vec<HistoryRow>>> {
    let record = state.store.player(&id)?;
    Ok(Json(record.progress.answer_history(&state.pack)))
}

#[derive(Debug, Deserialize)]
pub struct ProfileRequest {
    pub responses: Vec<ProfileResponse>,
}

async fn profile(
    State(state): State<AppState>,
    Authed(id): Authed,
    body: Body<ProfileRequest>,
) -> ApiResult<Json<ProfileReport>> {
    let Json(req) = body?;
    let report = blocking(&state, move |s| {
        s.store.update_player(&id, |rec| -> ApiResult<_> {
            Ok(rec
                .progress
                .record_profile_questionnaire(&s.pack.profile, &req.responses)?)
        })
    })
    .await?;
    Ok(Json(report))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PlanView {
    #[serde(flatten)]
    pub plan: BusinessPlan,
    pub completeness: Completeness,
}

impl From<BusinessPlan> for PlanView {
    fn from(plan: BusinessPlan) -> Self {
        let completeness = plan.completeness_report();
        Self { plan, completeness }
    }
}

async fn get_plan(State(state): State<AppState>, Authed(id): Authed) -> ApiResult<Json<PlanView>> {
    Ok(Json(state.store.player(&id)?.plan.into()))
}

/// Replaces the bodies of the listed sections. All keys are checked before
/// anything is written.
#[derive(Debug, Deserialize)]
pub struct PlanUpdate {
    pub sections: HashMap<String, String>,
}

async fn put_plan(
    State(state): State<AppState>,
    Authed(id): Authed,
    body: Body<PlanUpdate>,
) -> ApiResult<Json<PlanView>> {
    let Json(req) = body?;
    let plan = blocking(&state, move |s| {
        s.store.update_player(&id, |rec| -> ApiResult<_> {
            let mut keys: Vec<&String> = req.sections.keys().collect();
            keys.sort();
            for key in keys {
                rec.plan.upsert_section(key, req.sections[key].clone())?;
            }
            Ok(rec.plan.clone())
        })
    })
    .await?;
    Ok(Json(plan.into()))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SectionBody {
    pub body: String,
}

async fn get_section(
    State(state): State<AppState>,
    Authed(id): Authed,
    key: Result<Path<String>, PathRejection>,
) -> ApiResult<Json<SectionBody>> {
    let Path(key) = key?;
    let record = state.store.player(&id)?;
    let body = record
        .plan
        .section(&key)
        .ok_or(PlanError::UnknownSection(key.clone()))?;
    Ok(Json(SectionBody { body: body.to_owned() }))
}

async fn put_section(
    State(state): State<AppState>,
    Authed(id): Authed,
    key: Result<Path<String>, PathRejection>,
    body: Body<SectionBody>,
) -> ApiResult<Json<PlanView>> {
    let Path(key) = key?;
    let Json(req) = body?;
    let plan = blocking(&state, move |s| {
        s.store.update_player(&id, |rec| -> ApiResult<_> {
            rec.plan.upsert_section(&key, req.body)?;
            Ok(rec.plan.clone())
        })
    })
    .await?;
    Ok(Json(plan.into()))
}

async fn export_plan(State(state): State<AppState>, Authed(id): Authed) -> ApiResult<Response> {
    let record = state.store.player(&id)?;
    Ok((
        [
            (header::CONTENT_TYPE, "text/markdown; charset=utf-8".to_owned()),
            (
                header::CONTENT_DISPOSITION,
                format!("attachment; filename=\"business-plan-{}.md\"", record.player_id),
            ),
        ],
        record.plan.export(),
    )
        .into_response())
}

fn find_exercise<'a>(pack: &'a ContentPack, id: &str) -> ApiResult<&'a Exercise> {
    pack.levels
        .iter()
        .flat_map(|l| &l.exercises)
        .find(|e| e.id() == id)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "unknown_exercise", format!("unknown exercise {id:?}")))
}

#[derive(Debug, Deserialize)]
pub struct SeedQuery {
    pub seed: Option<u64>,
}

/// A shuffled round. Classification rounds list item labels and the
/// available categories; ordering rounds list the stages out of order.
#[derive(Debug, Serialize, Deserialize)]
pub struct RoundView {
    pub exercise_id: String,
    pub seed: u64,
    pub items: Vec<String>,
    pub categories: Vec<String>,
}

async fn exercise_round(
    State(state): State<AppState>,
    _auth: Authed,
    id: Result<Path<String>, PathRejection>,
    query: Result<Query<SeedQuery>, QueryRejection>,
) -> ApiResult<Json<RoundView>> {
    let Path(id) = id?;
    let Query(q) = query?;
    let seed = q.seed.unwrap_or_else(now_millis);
    let exercise = find_exercise(&state.pack, &id)?;
    let view = match exercise {
        Exercise::Classification { taxonomy, .. } => {
            let tax = state.pack.taxonomy(taxonomy).expect("validated pack");
            let round = new_classification_round(tax, seed)?;
            RoundView {
                exercise_id: id,
                seed,
                items: round.presented_items,
                categories: tax.categories.clone(),
            }
        }
        Exercise::Ordering { stages, .. } => {
            let mut items = stages.clone();
            seeded_shuffle(&mut items, seed);
            RoundView {
                exercise_id: id,
                seed,
                items,
                categories: Vec::new(),
            }
        }
    };
    Ok(Json(view))
}

/// `placements` (item label to category) for classification exercises,
/// `order` for ordering exercises.
#[derive(Debug, Deserialize)]
pub struct ExerciseAnswer {
    pub seed: u64,
    #[serde(default)]
    pub placements: HashMap<String, String>,
    #[serde(default)]
    pub order: Vec<String>,
}

async fn exercise_score(
    State(state): State<AppState>,
    _auth: Authed,
    id: Result<Path<String>, PathRejection>,
    body: Body<ExerciseAnswer>,
) -> ApiResult<Json<RoundScore>> {
    let Path(id) = id?;
    let Json(answer) = body?;
    let score = match find_exercise(&state.pack, &id)? {
        Exercise::Classification { taxonomy, .. } => {
            let tax = state.pack.taxonomy(taxonomy).expect("validated pack");
            let round = new_classification_round(tax, answer.seed)?;
            score_classification(&round, tax, &answer.placements)?
        }
        Exercise::Ordering { stages, .. } => score_ordering(stages, &answer.order)?,
    };
    Ok(Json(score))
}

/// What a player sees of a venture. The random stream and its seed stay on
/// the server.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketView {
    pub turn: u32,
    pub horizon: u32,
    pub cash: f64,
    pub inventory_units: u64,
    pub equity: f64,
    pub initial_equity: f64,
    pub debt: f64,
    pub learning_score: f64,
    pub bankrupt: bool,
    pub finished: bool,
    pub balance: BalanceSheet,
}

fn market_view(state: &MarketState, config: &VentureConfig, initial_equity: f64) -> MarketView {
    MarketView {
        turn: state.turn,
        horizon: config.horizon,
        cash: state.cash,
        inventory_units: state.inventory_units,
        equity: state.equity,
        initial_equity,
        debt: state.debt,
        learning_score: state.learning_score,
        bankrupt: state.bankrupt,
        finished: state.is_finished(config),
        balance: state.balance_sheet(config),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MarketStatus {
    pub active: Option<MarketView>,
    pub history: Vec<MarketSummary>,
}

async fn market(State(state): State<AppState>, Authed(id): Authed) -> ApiResult<Json<MarketStatus>> {
    let record = state.store.player(&id)?;
    Ok(Json(MarketStatus {
        active: record
            .market
            .as_ref()
            .map(|m| market_view(&m.state, &m.config, m.initial.equity)),
        history: record.market_history,
    }))
}

#[derive(Debug, Default, Deserialize)]
pub struct StartRequest {
    /// Partial venture config; missing fields take their defaults.
    #[serde(default)]
    pub config: Option<VentureConfig>,
    /// Abandon a simulation in progress instead of failing.
    #[serde(default)]
    pub restart: bool,
}

async fn market_start(
    State(state): State<AppState>,
    Authed(id): Authed,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<MarketView>)> {
    let req: StartRequest = if body.iter().all(u8::is_ascii_whitespace) {
        StartRequest::default()
    } else {
        serde_json::from_slice(&body)
            .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "bad_request", e.to_string()))?
    };
    let view = blocking(&state, move |s| {
        s.store.update_player(&id, |rec| -> ApiResult<_> {
            if rec.market.is_some() && !req.restart {
                return Err(ApiError::new(
                    StatusCode::CONFLICT,
                    "market_active",
                    "a simulation is already running; pass restart: true to abandon it",
                ));
            }
            let config = req.config.unwrap_or_default();
            let seed = derive_seed(s.server_seed, &rec.player_id, rec.market_runs);
            let learning = rec.progress.learning_score().value;
            let initial = MarketState::new(&config, learning, seed)?;
            let view = market_view(&initial, &config, initial.equity);
            rec.market = Some(ActiveMarket::new(config, initial));
            rec.market_runs += 1;
            Ok(view)
        })
    })
    .await?;
    Ok((StatusCode::CREATED, Json(view)))
}

#[derive(Debug, Deserialize)]
pub struct TurnRequest {
    pub decision: Decision,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OutcomeView {
    pub success: bool,
    pub score: i64,
    pub ranked: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TurnResponse {
    pub result: TurnResult,
    pub state: MarketView,
    pub outcome: Option<OutcomeView>,
}

async fn market_turn(
    State(state): State<AppState>,
    Authed(id): Authed,
    body: Body<TurnRequest>,
) -> ApiResult<Json<TurnResponse>> {
    let Json(req) = body?;
    let response = blocking(&state, move |s| {
        let (response, finished) = s.store.update_player(&id, |rec| -> ApiResult<_> {
            let market = rec.market.as_mut().ok_or_else(|| {
                ApiError::new(StatusCode::CONFLICT, "no_active_market", "start a simulation first")
            })?;
            let result = market.state.step(&req.decision, &market.config)?;
            market.turns.push(result.clone());
            let view = market_view(&market.state, &market.config, market.initial.equity);
            let finished: Option<SimulationOutcome> = market
                .state
                .is_finished(&market.config)
                .then(|| market.outcome());
            if let Some(outcome) = &finished {
                rec.market_history.push(MarketSummary::of(outcome, now_millis()));
                rec.market = None;
            }
            Ok((
                TurnResponse {
                    result,
                    state: view,
                    outcome: finished.as_ref().map(|o| OutcomeView {
                        success: o.success,
                        score: o.score,
                        ranked: o.success,
                    }),
                },
                finished,
            ))
        })?;
        if let Some(outcome) = finished.filter(|o| o.success) {
            s.store.record_result(&id, &outcome, now_millis())?;
        }
        Ok(response)
    })
    .await?;
    Ok(Json(response))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopListRow {
    pub rank: usize,
    pub player_id: String,
    pub display_name: String,
    pub score: i64,
    pub achieved_at: u64,
}

async fn toplist(State(state): State<AppState>) -> Json<Vec<TopListRow>> {
    let rows = state
        .store
        .top_list()
        .into_iter()
        .enumerate()
        .map(|(i, e)| TopListRow {
            rank: i + 1,
            display_name: state
                .store
                .player(&e.player_id)
                .map(|r| r.display_name)
                .unwrap_or_default(),
            player_id: e.player_id,
            score: e.score,
            achieved_at: e.achieved_at,
        })
        .collect();
    Json(rows)
}

#[derive(Debug, Deserialize)]
pub struct ChatPost {
    pub body: String,
}

#[derive(Debug, Deserialize)]
pub struct SinceQuery {
    #[serde(default)]
    pub since: u64,
}

async fn post_chat(
    State(state): State<AppState>,
    Authed(id): Authed,
    room: Result<Path<String>, PathRejection>,
    body: Body<ChatPost>,
) -> ApiResult<(StatusCode, Json<ChatMessage>)> {
    let Path(room) = room?;
    let Json(req) = body?;
    let message = blocking(&state, move |s| {
        Ok(s.store.post_message(&room, &id, &req.body, now_millis())?)
    })
    .await?;
    Ok((StatusCode::CREATED, Json(message)))
}

async fn list_chat(
    State(state): State<AppState>,
    _auth: Authed,
    room: Result<Path<String>, PathRejection>,
    query: Result<Query<SinceQuery>, QueryRejection>,
) -> ApiResult<Json<Vec<ChatMessage>>> {
    let Path(room) = room?;
    let Query(q) = query?;
    Ok(Json(state.store.list_messages(&room, q.since)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_depend_on_every_input() {
        let a = derive_seed(1, "p", 0);
        assert_eq!(a, derive_seed(1, "p", 0));
        assert_ne!(a, derive_seed(2, "p", 0));
        assert_ne!(a, derive_seed(1, "q", 0));
        assert_ne!(a, derive_seed(1, "p", 1));
    }

    #[test]
    fn error_statuses() {
        let e: ApiError = StoreError::Storage("disk".into()).into();
        assert_eq!(e.status, StatusCode::INTERNAL_SERVER_ERROR);
        let e: ApiError = ProgressionError::LevelLocked(3).into();
        assert_eq!((e.status, e.code), (StatusCode::FORBIDDEN, "level_locked"));
        let e: ApiError = MarketError::SimulationOver.into();
        assert_eq!(e.status, StatusCode::CONFLICT);
    }
}
