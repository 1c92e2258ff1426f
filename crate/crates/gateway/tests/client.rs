use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use jabberwock_core::degrade::{build_map, degrade, make_condition, ConditionName, DegradedPassage};
use jabberwock_core::nonce::NoncePool;
use jabberwock_core::scoring::Embedder;
use jabberwock_core::translation::{ProviderError, Translator};
use jabberwock_core::{Genre, Parser, Passage};
use jabberwock_gateway::prompt::{build_translation_prompt, TASK_SENTENCE};
use jabberwock_gateway::{DiskCache, GatewayEmbedder, InFlightLimiter, LlmTranslator, MockTransport, ModelConfig, TransportError};
use proptest::prelude::*;

const TEXT: &str = "The boy walked into the store. He bought gum and walked home.";

fn cfg() -> ModelConfig {
    let mut c = ModelConfig::new("http://mock.invalid/v1", "mock-model");
    c.retry_base_ms = 1;
    c.max_retries = 3;
    c
}

fn degraded(name: ConditionName) -> DegradedPassage {
    let parsed = Parser::default().parse(TEXT);
    let map = build_map("p1", &parsed, &NoncePool::shipped(), 4).unwrap();
    degrade(&Passage::new("p1", Genre::Fiction, TEXT), &parsed, &make_condition(name), &map).unwrap()
}

fn gloss_reply(d: &DegradedPassage) -> String {
    let inv = d.map.inverse();
    d.nonces().iter().map(|n| format!("{n} -> {}", inv[n])).collect::<Vec<_>>().join("\n")
}

#[test]
fn translation_then_gloss_in_one_conversation() {
    let d = degraded(ConditionName::Standard);
    let t = Arc::new(MockTransport::scripted("The boy walked into the store.", &gloss_reply(&d)));
    let rec = LlmTranslator::new(cfg(), t.clone(), None).translate(&d).unwrap();
    assert_eq!(t.calls(), 2);
    let reqs = t.requests();
    assert_eq!(reqs[0].len(), 1);
    assert!(reqs[0][0].content.starts_with(TASK_SENTENCE));
    assert!(reqs[0][0].content.ends_with(&d.text));
    assert_eq!(reqs[1].len(), 3);
    assert_eq!(reqs[1][1].role, "assistant");
    for n in d.nonces() {
        assert!(reqs[1][2].content.contains(&n));
    }
    assert_eq!(rec.gloss, d.map.inverse().into_iter().filter(|(n, _)| d.nonces().contains(n)).collect());
    assert!(!rec.gloss_warning && !rec.cached);
    assert!(rec.gloss_keys_valid(&d));
    assert_eq!(rec.request_params.get("model").map(String::as_str), Some("mock-model"));
}

#[test]
fn blanks_send_no_nonces_and_skip_the_gloss_turn() {
    let d = degraded(ConditionName::Blanks);
    let t = Arc::new(MockTransport::scripted("The boy walked.", "should not be requested"));
    let rec = LlmTranslator::new(cfg(), t.clone(), None).translate(&d).unwrap();
    assert_eq!(t.calls(), 1);
    let prompt = &t.requests()[0][0].content;
    for n in d.map.entries.values() {
        assert!(!prompt.to_lowercase().contains(n.as_str()), "{n} leaked into the prompt");
    }
    assert!(rec.gloss.is_empty() && !rec.gloss_warning);
}

#[test]
fn cache_hit_makes_no_calls() {
    let dir = tempfile::tempdir().unwrap();
    let d = degraded(ConditionName::Standard);
    let t1 = Arc::new(MockTransport::scripted("first answer", &gloss_reply(&d)));
    let fresh = LlmTranslator::new(cfg(), t1.clone(), Some(DiskCache::open(dir.path()).unwrap())).translate(&d).unwrap();
    let t2 = Arc::new(MockTransport::scripted("different answer", "x -> y"));
    let cached = LlmTranslator::new(cfg(), t2.clone(), Some(DiskCache::open(dir.path()).unwrap())).translate(&d).unwrap();
    assert_eq!(t2.calls(), 0);
    assert!(cached.cached);
    assert_eq!(cached.translation_text.as_bytes(), fresh.translation_text.as_bytes());
    assert_eq!(cached.gloss, fresh.gloss);

    // A different model or protocol side (gloss off) misses.
    let t3 = Arc::new(MockTransport::scripted("third", ""));
    LlmTranslator::new(cfg(), t3.clone(), Some(DiskCache::open(dir.path()).unwrap())).without_gloss().translate(&d).unwrap();
    assert_eq!(t3.calls(), 1);
}

#[test]
fn retries_then_succeeds() {
    let d = degraded(ConditionName::Standard);
    let n = Arc::new(AtomicUsize::new(0));
    let n2 = n.clone();
    let t = Arc::new(MockTransport::new(
        move |m| {
            if n2.fetch_add(1, Ordering::SeqCst) < 2 {
                Err(TransportError::retryable("HTTP 429"))
            } else if m.len() == 1 {
                Ok("ok".into())
            } else {
                Ok(String::new())
            }
        },
        |_| Ok(vec![1.0]),
    ));
    let rec = LlmTranslator::new(cfg(), t.clone(), None).translate(&d).unwrap();
    assert_eq!(rec.translation_text, "ok");
    assert_eq!(t.calls(), 4);
    assert!(rec.gloss_warning && rec.gloss.is_empty());
}

#[test]
fn gives_up_after_max_retries_and_stops_on_fatal_errors() {
    let d = degraded(ConditionName::Standard);
    let t = Arc::new(MockTransport::new(|_| Err(TransportError::retryable("HTTP 503")), |_| Ok(vec![1.0])));
    match LlmTranslator::new(cfg(), t.clone(), None).translate(&d) {
        Err(ProviderError::Transport { attempts, .. }) => assert_eq!(attempts, 4),
        other => panic!("{other:?}"),
    }
    assert_eq!(t.calls(), 4);
    let t = Arc::new(MockTransport::new(|_| Err(TransportError::fatal("HTTP 401")), |_| Ok(vec![1.0])));
    assert!(matches!(LlmTranslator::new(cfg(), t.clone(), None).translate(&d), Err(ProviderError::Transport { attempts: 1, .. })));
    assert_eq!(t.calls(), 1);
}

#[test]
fn empty_completion_is_an_error() {
    let d = degraded(ConditionName::Standard);
    let t = Arc::new(MockTransport::scripted("   ", ""));
    assert!(matches!(LlmTranslator::new(cfg(), t, None).translate(&d), Err(ProviderError::EmptyResponse)));
}

#[test]
fn unparseable_gloss_sets_the_warning() {
    let d = degraded(ConditionName::Standard);
    let t = Arc::new(MockTransport::scripted("fine", "I would rather not say."));
    let rec = LlmTranslator::new(cfg(), t, None).translate(&d).unwrap();
    assert!(rec.gloss.is_empty() && rec.gloss_warning);
    assert_eq!(rec.gloss_unparsed, ["I would rather not say."]);
}

#[test]
fn concurrent_calls_respect_the_in_flight_limit() {
    let d = degraded(ConditionName::Standard);
    let mut c = cfg();
    c.max_in_flight = 3;
    let t = Arc::new(MockTransport::scripted("x", &gloss_reply(&d)).with_delay(Duration::from_millis(15)));
    let limiter = Arc::new(InFlightLimiter::new(c.max_in_flight));
    std::thread::scope(|s| {
        for _ in 0..12 {
            let tr = LlmTranslator::new(c.clone(), t.clone(), None).with_limiter(limiter.clone());
            let d = &d;
            s.spawn(move || tr.translate(d).unwrap());
        }
    });
    assert_eq!(t.calls(), 24);
    assert!(t.peak_in_flight() <= 3, "peak {}", t.peak_in_flight());
    assert!(t.peak_in_flight() >= 2, "limiter serialized everything");
    assert_eq!(limiter.in_flight(), 0);
}

#[test]
fn embedder_caches_and_checks_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let t = Arc::new(MockTransport::new(|_| Ok(String::new()), |text| Ok(vec![1.0; text.len() % 3 + 2])));
    let e = GatewayEmbedder::new(cfg(), t.clone(), Some(DiskCache::open(dir.path()).unwrap()));
    let a = e.embed("ab").unwrap();
    assert_eq!(e.embed("ab").unwrap(), a);
    assert_eq!(t.calls(), 1);
    e.embed("abcde").unwrap();
    assert!(matches!(e.embed("abc"), Err(ProviderError::Config(_))));

    // The dimension is remembered across instances through the cache.
    let e2 = GatewayEmbedder::new(cfg(), t.clone(), Some(DiskCache::open(dir.path()).unwrap()));
    assert!(matches!(e2.embed("abcdef"), Err(ProviderError::Config(_))));
    assert!(matches!(e2.embed("  "), Err(ProviderError::Config(_))));
}

proptest! {
    #[test]
    fn prompt_always_carries_the_task_sentence(text in "\\PC{1,300}") {
        let p = build_translation_prompt(&text);
        prop_assert!(p.starts_with(TASK_SENTENCE));
        prop_assert!(p.contains("instead of giving up and using a placeholder such as 'something' or 'someone' or the nonce word itself"));
        prop_assert!(p.ends_with(&text));
        prop_assert_eq!(p, build_translation_prompt(&text));
    }
}
