//! Four-dimension contexts (location, users, object, time) and the
//! superposition test that decides whether a concrete context validates a
//! required pattern.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::id::EntityId;
use crate::kb::KnowledgeBase;
use crate::literal::Decimal;
use crate::schema::inventory::DeviceInventory;
use crate::schema::records::{HardwareKind, LocationRecord, Point};

/// Closed interval of simulation time in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeInterval {
    start: i64,
    end: i64,
}

impl TimeInterval {
    pub fn new(start: i64, end: i64) -> Option<Self> {
        (start <= end).then_some(Self { start, end })
    }

    pub fn instant(t: i64) -> Self {
        Self { start: t, end: t }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.end
    }

    pub fn overlaps(&self, other: &TimeInterval) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ContextRecord {
    pub location: Option<LocationRecord>,
    pub users: BTreeSet<EntityId>,
    pub object: Option<EntityId>,
    pub time: Option<TimeInterval>,
}

impl ContextRecord {
    pub fn with_users(users: impl IntoIterator<Item = EntityId>) -> Self {
        Self {
            users: users.into_iter().collect(),
            ..Default::default()
        }
    }

    /// Number of populated dimensions, 0 to 4.
    pub fn specificity(&self) -> usize {
        usize::from(self.location.is_some())
            + usize::from(!self.users.is_empty())
            + usize::from(self.object.is_some())
            + usize::from(self.time.is_some())
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.specificity() == 0 {
            return Err("context has no dimension".into());
        }
        if let Some(loc) = &self.location {
            loc.validate()?;
        }
        Ok(())
    }
}

/// Location constraints; each populated field must be matched exactly.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LocationPattern {
    pub point: Option<Point>,
    pub district: Option<String>,
    pub street: Option<String>,
    pub building: Option<String>,
    pub floor: Option<String>,
    pub room: Option<String>,
}

impl LocationPattern {
    pub fn is_empty(&self) -> bool {
        self.point.is_none()
            && self.district.is_none()
            && self.street.is_none()
            && self.building.is_none()
            && self.floor.is_none()
            && self.room.is_none()
    }
}

impl From<&LocationRecord> for LocationPattern {
    fn from(loc: &LocationRecord) -> Self {
        Self {
            point: loc.point.clone(),
            district: loc.district.clone(),
            street: loc.street.clone(),
            building: loc.building.clone(),
            floor: loc.floor.clone(),
            room: loc.room.clone(),
        }
    }
}

/// Context an agent searches for. Every dimension is optional and the
/// empty pattern matches anything.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ContextPattern {
    pub location: LocationPattern,
    /// Required subset of the context's users.
    pub users: BTreeSet<EntityId>,
    pub object: Option<EntityId>,
    /// Window the context's time must overlap.
    pub time: Option<TimeInterval>,
}

impl ContextPattern {
    pub fn any() -> Self {
        Self::default()
    }

    pub fn users(users: impl IntoIterator<Item = EntityId>) -> Self {
        Self {
            users: users.into_iter().collect(),
            ..Default::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.location.is_empty() && self.users.is_empty() && self.object.is_none() && self.time.is_none()
    }
}

impl From<&ContextRecord> for ContextPattern {
    fn from(ctx: &ContextRecord) -> Self {
        Self {
            location: ctx.location.as_ref().map(LocationPattern::from).unwrap_or_default(),
            users: ctx.users.clone(),
            object: ctx.object.clone(),
            time: ctx.time,
        }
    }
}

fn field_matches<T: PartialEq>(required: &Option<T>, actual: Option<&T>) -> bool {
    match required {
        None => true,
        Some(r) => actual == Some(r),
    }
}

/// Superposition test: every dimension the pattern specifies must be
/// validated by the context.
pub fn matches(pattern: &ContextPattern, ctx: &ContextRecord) -> bool {
    let loc = ctx.location.as_ref();
    let lp = &pattern.location;
    let location_ok = field_matches(&lp.point, loc.and_then(|l| l.point.as_ref()))
        && field_matches(&lp.district, loc.and_then(|l| l.district.as_ref()))
        && field_matches(&lp.street, loc.and_then(|l| l.street.as_ref()))
        && field_matches(&lp.building, loc.and_then(|l| l.building.as_ref()))
        && field_matches(&lp.floor, loc.and_then(|l| l.floor.as_ref()))
        && field_matches(&lp.room, loc.and_then(|l| l.room.as_ref()));
    let time_ok = match (&pattern.time, &ctx.time) {
        (None, _) => true,
        (Some(p), Some(c)) => p.overlaps(c),
        (Some(_), None) => false,
    };
    location_ok
        && pattern.users.is_subset(&ctx.users)
        && field_matches(&pattern.object, ctx.object.as_ref())
        && time_ok
}

/// Kind of atomic device an action or requirement needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeviceKind {
    Sensor,
    Actuator,
}

impl DeviceKind {
    pub fn hardware_kind(self) -> HardwareKind {
        match self {
            DeviceKind::Sensor => HardwareKind::Sensor,
            DeviceKind::Actuator => HardwareKind::Actuator,
        }
    }
}

impl From<DeviceKind> for KindFilter {
    fn from(k: DeviceKind) -> Self {
        match k {
            DeviceKind::Sensor => KindFilter::Sensor,
            DeviceKind::Actuator => KindFilter::Actuator,
        }
    }
}

impl FromStr for DeviceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.parse::<KindFilter>()? {
            KindFilter::Sensor => Ok(DeviceKind::Sensor),
            KindFilter::Actuator => Ok(DeviceKind::Actuator),
            KindFilter::Any => Err("expected sensor or actuator".into()),
        }
    }
}

impl fmt::Display for DeviceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        KindFilter::from(*self).fmt(f)
    }
}

/// Device-kind filter for [`find_devices`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KindFilter {
    Sensor,
    Actuator,
    Any,
}

impl KindFilter {
    pub fn accepts(self, kind: HardwareKind) -> bool {
        match self {
            KindFilter::Sensor => kind == HardwareKind::Sensor,
            KindFilter::Actuator => kind == HardwareKind::Actuator,
            KindFilter::Any => true,
        }
    }
}

impl FromStr for KindFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sensor" => Ok(KindFilter::Sensor),
            "actuator" => Ok(KindFilter::Actuator),
            "any" => Ok(KindFilter::Any),
            other => Err(format!("unknown device kind `{other}` (expected sensor, actuator or any)")),
        }
    }
}

impl fmt::Display for KindFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KindFilter::Sensor => "sensor",
            KindFilter::Actuator => "actuator",
            KindFilter::Any => "any",
        })
    }
}

/// Functioning top-level devices bearing `capability` whose context
/// validates `pattern`.
///
/// Components are represented by their outermost composite, which offers
/// the capabilities of its functioning components. Results are ordered by
/// context specificity (descending), then id.
pub fn find_devices(
    kb: &KnowledgeBase,
    pattern: &ContextPattern,
    capability: &EntityId,
    kind: KindFilter,
) -> Vec<EntityId> {
    find_in_inventory(&DeviceInventory::from_kb(kb), pattern, capability, kind)
}

/// [`find_devices`] over an already built inventory.
pub fn find_in_inventory(
    inventory: &DeviceInventory,
    pattern: &ContextPattern,
    capability: &EntityId,
    kind: KindFilter,
) -> Vec<EntityId> {
    let empty = ContextRecord::default();
    let mut hits: Vec<(usize, &EntityId)> = inventory
        .roots()
        .filter(|rec| inventory.effectively_functioning(&rec.id))
        .filter(|rec| {
            inventory
                .offered_capabilities(&rec.id)
                .iter()
                .any(|(cap, k)| cap == capability && kind.accepts(*k))
        })
        .filter_map(|rec| {
            let ctx = rec.context.as_ref().unwrap_or(&empty);
            matches(pattern, ctx).then_some((ctx.specificity(), &rec.id))
        })
        .collect();
    hits.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    hits.into_iter().map(|(_, id)| id.clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern clause `{0}` is not of the form dim=value")]
    MissingEquals(String),
    #[error("unknown pattern dimension `{0}`")]
    UnknownDimension(String),
    #[error("invalid value for `{dim}`: {reason}")]
    BadValue { dim: String, reason: String },
}

fn strip_quotes(v: &str) -> &str {
    let v = v.trim();
    for q in ['\'', '"'] {
        if let Some(inner) = v.strip_prefix(q).and_then(|s| s.strip_suffix(q)) {
            return inner;
        }
    }
    v
}

/// Parses the `dim=value&dim=value` pattern literal.
///
/// Dimensions: `district`, `street`, `building`, `floor`, `room`,
/// `point=lat,lon[,alt]`, `user` (repeatable), `object`, `time=start..end`.
/// Names are case-insensitive and may carry a `location.` / `user.`
/// qualifier, so `Location.Building='Maison de John'` is accepted too.
impl FromStr for ContextPattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut pattern = ContextPattern::default();
        for clause in s.split('&').map(str::trim).filter(|c| !c.is_empty()) {
            let (dim, value) = clause
                .split_once('=')
                .ok_or_else(|| PatternError::MissingEquals(clause.to_string()))?;
            let dim_lc = dim.trim().to_ascii_lowercase();
            let dim_lc = dim_lc
                .strip_prefix("location.")
                .or_else(|| dim_lc.strip_prefix("context."))
                .unwrap_or(&dim_lc)
                .to_string();
            let value = strip_quotes(value);
            let bad = |reason: String| PatternError::BadValue {
                dim: dim_lc.clone(),
                reason,
            };
            if value.is_empty() {
                return Err(bad("empty value".into()));
            }
            let text = Some(value.to_string());
            match dim_lc.as_str() {
                "district" => pattern.location.district = text,
                "street" => pattern.location.street = text,
                "building" => pattern.location.building = text,
                "floor" => pattern.location.floor = text,
                "room" => pattern.location.room = text,
                "point" => {
                    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                    if !(2..=3).contains(&parts.len()) {
                        return Err(bad("expected lat,lon[,alt]".into()));
                    }
                    let dec = |p: &str| Decimal::parse(p).map_err(|e| bad(e.to_string()));
                    pattern.location.point = Some(Point {
                        latitude: dec(parts[0])?,
                        longitude: dec(parts[1])?,
                        altitude: parts.get(2).map(|p| dec(p)).transpose()?,
                    });
                }
                "user" | "users" | "user.id" => {
                    for u in value.split(',') {
                        let id = u.trim().parse().map_err(|e: crate::id::IdError| bad(e.to_string()))?;
                        pattern.users.insert(id);
                    }
                }
                "object" => {
                    pattern.object =
                        Some(value.parse().map_err(|e: crate::id::IdError| bad(e.to_string()))?)
                }
                "time" => {
                    let (a, b) = value
                        .split_once("..")
                        .ok_or_else(|| bad("expected start..end".into()))?;
                    let a: i64 = a.trim().parse().map_err(|_| bad(format!("`{a}` is not an integer")))?;
                    let b: i64 = b.trim().parse().map_err(|_| bad(format!("`{b}` is not an integer")))?;
                    pattern.time =
                        Some(TimeInterval::new(a, b).ok_or_else(|| bad("start after end".into()))?);
                }
                _ => return Err(PatternError::UnknownDimension(dim.trim().to_string())),
            }
        }
        Ok(pattern)
    }
}

impl fmt::Display for ContextPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut clauses = Vec::new();
        let loc = &self.location;
        if let Some(p) = &loc.point {
            let mut v = format!("point={},{}", p.latitude.lexical(), p.longitude.lexical());
            if let Some(alt) = &p.altitude {
                v.push(',');
                v.push_str(alt.lexical());
            }
            clauses.push(v);
        }
        for (name, field) in [
            ("district", &loc.district),
            ("street", &loc.street),
            ("building", &loc.building),
            ("floor", &loc.floor),
            ("room", &loc.room),
        ] {
            if let Some(v) = field {
                clauses.push(format!("{name}={v}"));
            }
        }
        for u in &self.users {
            clauses.push(format!("user={u}"));
        }
        if let Some(o) = &self.object {
            clauses.push(format!("object={o}"));
        }
        if let Some(t) = &self.time {
            clauses.push(format!("time={}..{}", t.start, t.end));
        }
        f.write_str(&clauses.join("&"))
    }
}

/// Patterns travel through JSON as their literal form.
impl Serialize for ContextPattern {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ContextPattern {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> EntityId {
        s.parse().unwrap()
    }

    fn bedroom() -> LocationRecord {
        LocationRecord {
            building: Some("Maison de John".into()),
            floor: Some("2".into()),
            room: Some("Bedroom".into()),
            ..Default::default()
        }
    }

    #[test]
    fn identical_location_matches() {
        let ctx = ContextRecord {
            location: Some(bedroom()),
            ..Default::default()
        };
        let pattern: ContextPattern =
            "Location.Building='Maison de John'&Location.Floor=2&Location.Room=Bedroom"
                .parse()
                .unwrap();
        assert!(matches(&pattern, &ctx));
        assert_eq!(pattern, ContextPattern::from(&ctx));
    }

    #[test]
    fn empty_pattern_is_wildcard() {
        let ctx = ContextRecord::with_users([id("sc:john")]);
        assert!(matches(&ContextPattern::any(), &ctx));
        assert!(matches(&ContextPattern::any(), &ContextRecord::default()));
    }

    #[test]
    fn users_are_a_required_subset() {
        let pattern = ContextPattern::users([id("sc:john")]);
        assert!(matches(
            &pattern,
            &ContextRecord::with_users([id("sc:john"), id("sc:jane")])
        ));
        assert!(!matches(&pattern, &ContextRecord::with_users([id("sc:jane")])));
    }

    #[test]
    fn specified_field_needs_context_field() {
        let pattern: ContextPattern = "room=Bedroom".parse().unwrap();
        assert!(!matches(&pattern, &ContextRecord::with_users([id("sc:john")])));
        let kitchen = ContextRecord {
            location: Some(LocationRecord {
                building: Some("Maison de John".into()),
                room: Some("Kitchen".into()),
                ..Default::default()
            }),
            ..Default::default()
        };
        assert!(!matches(&pattern, &kitchen));
    }

    #[test]
    fn time_windows_overlap_closed() {
        let ctx = ContextRecord {
            time: TimeInterval::new(100, 200),
            ..Default::default()
        };
        let at = |a, b| ContextPattern {
            time: TimeInterval::new(a, b),
            ..Default::default()
        };
        assert!(matches(&at(200, 300), &ctx));
        assert!(matches(&at(0, 100), &ctx));
        assert!(!matches(&at(201, 300), &ctx));
        assert!(!matches(&at(0, 10), &ContextRecord::with_users([id("sc:john")])));
    }

    #[test]
    fn object_equality() {
        let ctx = ContextRecord {
            object: Some(id("sc:wheelchair1")),
            ..Default::default()
        };
        assert!(matches(&"object=sc:wheelchair1".parse().unwrap(), &ctx));
        assert!(!matches(&"object=sc:cane1".parse().unwrap(), &ctx));
    }

    #[test]
    fn pattern_literal_round_trips() {
        let text = "point=-21.1151,55.5361&building=MaisonDeJohn&room=Bedroom&user=sc:jane&user=sc:john&time=0..500";
        let pattern: ContextPattern = text.parse().unwrap();
        assert_eq!(pattern.to_string(), text);
        assert_eq!(pattern.to_string().parse::<ContextPattern>().unwrap(), pattern);
    }

    #[test]
    fn pattern_literal_errors() {
        assert!(matches!(
            "room".parse::<ContextPattern>(),
            Err(PatternError::MissingEquals(_))
        ));
        assert!(matches!(
            "colour=red".parse::<ContextPattern>(),
            Err(PatternError::UnknownDimension(_))
        ));
        assert!(matches!(
            "time=5..1".parse::<ContextPattern>(),
            Err(PatternError::BadValue { .. })
        ));
        assert!(matches!(
            "user=john".parse::<ContextPattern>(),
            Err(PatternError::BadValue { .. })
        ));
        assert!("".parse::<ContextPattern>().unwrap().is_empty());
    }

    #[test]
    fn specificity_counts_dimensions() {
        let mut ctx = ContextRecord::with_users([id("sc:john")]);
        assert_eq!(ctx.specificity(), 1);
        ctx.location = Some(bedroom());
        ctx.time = Some(TimeInterval::instant(5));
        assert_eq!(ctx.specificity(), 3);
        assert!(ctx.validate().is_ok());
        assert!(ContextRecord::default().validate().is_err());
    }
}
