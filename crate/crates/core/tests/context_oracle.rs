//! Context matching against a dimension-by-dimension oracle, and device
//! lookup against a filter-and-sort oracle.

mod common;

use std::collections::BTreeSet;

use ambient::context::{find_devices, matches, ContextPattern, ContextRecord, KindFilter, LocationPattern, TimeInterval};
use ambient::id::EntityId;
use ambient::literal::Decimal;
use ambient::schema::{sc, HardwareKind, LocationRecord, Point};
use proptest::prelude::*;

use common::{atomic, world_with};

const USERS: &[&str] = &["john", "jane", "ann"];
const OBJECTS: &[&str] = &["bed", "door"];
const BUILDINGS: &[&str] = &["MaisonDeJohn", "Annex"];
const ROOMS: &[&str] = &["Bedroom", "Kitchen"];
// same numbers, different spellings, so equality has to be numeric
const LATITUDES: &[&str] = &["-21.1151", "-21.11510", "-20.5"];

fn pick(pool: &'static [&'static str]) -> impl Strategy<Value = Option<String>> {
    prop::option::of(prop::sample::select(pool).prop_map(String::from))
}

fn point() -> impl Strategy<Value = Option<Point>> {
    prop::option::of((prop::sample::select(LATITUDES), prop::option::of(Just("12.0"))).prop_map(|(lat, alt)| Point {
        latitude: Decimal::parse(lat).unwrap(),
        longitude: Decimal::parse("55.5361").unwrap(),
        altitude: alt.map(|a| Decimal::parse(a).unwrap()),
    }))
}

fn interval() -> impl Strategy<Value = Option<TimeInterval>> {
    prop::option::of((0i64..20, 0i64..8).prop_map(|(s, len)| TimeInterval::new(s, s + len).unwrap()))
}

fn users() -> impl Strategy<Value = BTreeSet<EntityId>> {
    prop::collection::btree_set(prop::sample::select(USERS).prop_map(sc), 0..3)
}

fn object() -> impl Strategy<Value = Option<EntityId>> {
    prop::option::of(prop::sample::select(OBJECTS).prop_map(sc))
}

fn location() -> impl Strategy<Value = Option<LocationRecord>> {
    (point(), pick(&["North"]), pick(BUILDINGS), pick(&["1", "2"]), pick(ROOMS)).prop_map(
        |(point, district, building, floor, room)| {
            // rooms and floors only inside a building
            let building = if room.is_some() || floor.is_some() {
                building.or(Some(BUILDINGS[0].to_string()))
            } else {
                building
            };
            let loc = LocationRecord {
                point,
                district,
                street: None,
                building,
                floor,
                room,
            };
            (!loc.is_empty()).then_some(loc)
        },
    )
}

fn context() -> impl Strategy<Value = ContextRecord> {
    (location(), users(), object(), interval()).prop_map(|(location, users, object, time)| ContextRecord {
        location,
        users,
        object,
        time,
    })
}

fn pattern() -> impl Strategy<Value = ContextPattern> {
    (point(), pick(&["North", "South"]), pick(BUILDINGS), pick(&["1", "2"]), pick(ROOMS), users(), object(), interval())
        .prop_map(|(point, district, building, floor, room, users, object, time)| ContextPattern {
            location: LocationPattern {
                point,
                district,
                street: None,
                building,
                floor,
                room,
            },
            users,
            object,
            time,
        })
}

/// Every fact a context asserts, as (dimension, value) strings. Decimal
/// coordinates are normalized through their numeric value.
fn facts(ctx: &ContextRecord) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    if let Some(loc) = &ctx.location {
        if let Some(p) = &loc.point {
            let alt = p.altitude.as_ref().map(|a| a.value().to_string()).unwrap_or_default();
            out.insert(("point".into(), format!("{}/{}/{alt}", p.latitude.value(), p.longitude.value())));
        }
        for (dim, v) in [
            ("district", &loc.district),
            ("street", &loc.street),
            ("building", &loc.building),
            ("floor", &loc.floor),
            ("room", &loc.room),
        ] {
            if let Some(v) = v {
                out.insert((dim.into(), v.clone()));
            }
        }
    }
    for u in &ctx.users {
        out.insert(("user".into(), u.to_string()));
    }
    if let Some(o) = &ctx.object {
        out.insert(("object".into(), o.to_string()));
    }
    out
}

fn required(p: &ContextPattern) -> BTreeSet<(String, String)> {
    let as_ctx = ContextRecord {
        location: Some(LocationRecord::from_pattern(&p.location)),
        users: p.users.clone(),
        object: p.object.clone(),
        time: None,
    };
    facts(&as_ctx)
}

trait FromPattern {
    fn from_pattern(p: &LocationPattern) -> Self;
}

impl FromPattern for LocationRecord {
    fn from_pattern(p: &LocationPattern) -> Self {
        LocationRecord {
            point: p.point.clone(),
            district: p.district.clone(),
            street: p.street.clone(),
            building: p.building.clone(),
            floor: p.floor.clone(),
            room: p.room.clone(),
        }
    }
}

/// Some millisecond lies in both closed windows.
fn share_an_instant(a: TimeInterval, b: TimeInterval) -> bool {
    (a.start()..=a.end()).any(|t| (b.start()..=b.end()).contains(&t))
}

fn oracle(p: &ContextPattern, ctx: &ContextRecord) -> bool {
    let time_ok = match (p.time, ctx.time) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => share_an_instant(a, b),
    };
    required(p).is_subset(&facts(ctx)) && time_ok
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn matching_agrees_with_oracle(p in pattern(), ctx in context()) {
        prop_assert_eq!(matches(&p, &ctx), oracle(&p, &ctx));
    }

    #[test]
    fn pattern_literal_round_trips(p in pattern()) {
        let text = p.to_string();
        let back: ContextPattern = text.parse().unwrap();
        prop_assert_eq!(back, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn find_devices_filters_and_sorts(
        contexts in prop::collection::vec(prop::option::of(context()), 1..7),
        kinds in prop::collection::vec(any::<bool>(), 7),
        has_cap in prop::collection::vec(any::<bool>(), 7),
        broken in prop::collection::vec(any::<bool>(), 7),
        p in pattern(),
    ) {
        let persons: Vec<EntityId> = USERS.iter().map(|u| sc(u)).collect();
        let contexts: Vec<Option<ContextRecord>> = contexts
            .into_iter()
            .map(|c| c.filter(|c| c.specificity() > 0))
            .collect();
        let devices: Vec<_> = contexts
            .iter()
            .enumerate()
            .map(|(i, ctx)| {
                let kind = if kinds[i] { HardwareKind::Sensor } else { HardwareKind::Actuator };
                let caps: &[&str] = if has_cap[i] { &["Presence", "Light"] } else { &["Light"] };
                let mut rec = atomic(&format!("d{i}"), kind, caps, ctx.clone());
                rec.functioning = !broken[i];
                rec
            })
            .collect();
        let things: Vec<EntityId> = OBJECTS.iter().map(|o| sc(o)).collect();
        let kb = world_with(&persons, &things, &devices);
        for filter in [KindFilter::Sensor, KindFilter::Actuator, KindFilter::Any] {
            let mut expected: Vec<(usize, EntityId)> = devices
                .iter()
                .filter(|d| d.functioning && d.capabilities.contains(&sc("Presence")))
                .filter(|d| filter.accepts(d.kind))
                .filter(|d| oracle(&p, d.context.as_ref().unwrap_or(&ContextRecord::default())))
                .map(|d| (d.context.as_ref().map_or(0, ContextRecord::specificity), d.id.clone()))
                .collect();
            expected.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            let expected: Vec<EntityId> = expected.into_iter().map(|(_, id)| id).collect();
            prop_assert_eq!(find_devices(&kb, &p, &sc("Presence"), filter), expected);
        }
    }
}

#[test]
fn empty_pattern_matches_everything() {
    assert!(matches(&ContextPattern::any(), &ContextRecord::default()));
    let john = ContextPattern::users([sc("john")]);
    assert!(!matches(&john, &ContextRecord::default()));
}
