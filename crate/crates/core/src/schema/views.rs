//! Reading typed records out of a knowledge base, and writing them back as
//! axioms.

use std::collections::{BTreeMap, BTreeSet};

use crate::context::{ContextRecord, TimeInterval};
use crate::id::EntityId;
use crate::kb::{Axiom, KbError, KnowledgeBase};
use crate::literal::{Decimal, Literal};

use super::records::*;
use super::vocab::{class, prop, sc};
use super::SchemaError;

fn single_object(
    kb: &KnowledgeBase,
    subject: &EntityId,
    property: &str,
) -> Result<Option<EntityId>, SchemaError> {
    let mut values = kb.objects_of(subject, &sc(property));
    match values.len() {
        0 => Ok(None),
        1 => Ok(values.pop()),
        n => Err(SchemaError::malformed(subject, format!("{n} values for {property}"))),
    }
}

fn single_literal(
    kb: &KnowledgeBase,
    subject: &EntityId,
    property: &str,
) -> Result<Option<Literal>, SchemaError> {
    let mut values = kb.literals_of(subject, &sc(property));
    match values.len() {
        0 => Ok(None),
        1 => Ok(values.pop()),
        n => Err(SchemaError::malformed(subject, format!("{n} values for {property}"))),
    }
}

fn single_string(
    kb: &KnowledgeBase,
    subject: &EntityId,
    property: &str,
) -> Result<Option<String>, SchemaError> {
    match single_literal(kb, subject, property)? {
        None => Ok(None),
        Some(Literal::String(s)) => Ok(Some(s)),
        Some(other) => Err(SchemaError::malformed(
            subject,
            format!("{property} must be a string, found {other}"),
        )),
    }
}

fn strings(kb: &KnowledgeBase, subject: &EntityId, property: &str) -> BTreeSet<String> {
    kb.literals_of(subject, &sc(property))
        .into_iter()
        .filter_map(|l| l.as_str().map(str::to_string))
        .collect()
}

fn require_class(kb: &KnowledgeBase, id: &EntityId, class_name: &str) -> Result<(), SchemaError> {
    if kb.is_instance_of(id, &sc(class_name)) {
        Ok(())
    } else {
        Err(SchemaError::WrongClass {
            id: id.clone(),
            expected: sc(class_name),
        })
    }
}

/// Id of the context individual written for `owner`.
pub fn context_id_for(owner: &EntityId) -> EntityId {
    owner
        .sibling(&format!("{}_ctx", owner.local()))
        .expect("suffixing a valid id keeps it valid")
}

fn location_id_for(ctx: &EntityId) -> EntityId {
    ctx.sibling(&format!("{}_loc", ctx.local()))
        .expect("suffixing a valid id keeps it valid")
}

/// Reads a context individual without checking the record invariants, so
/// the result can also serve as a goal pattern.
pub fn read_context(kb: &KnowledgeBase, id: &EntityId) -> Result<ContextRecord, SchemaError> {
    require_class(kb, id, class::CONTEXT)?;
    let location = single_object(kb, id, prop::HAS_LOCATION)?
        .map(|loc| read_location(kb, &loc))
        .transpose()?;
    let time = match (
        single_literal(kb, id, prop::TIME_START)?,
        single_literal(kb, id, prop::TIME_END)?,
    ) {
        (None, None) => None,
        (Some(Literal::Integer(a)), Some(Literal::Integer(b))) => Some(
            TimeInterval::new(a, b)
                .ok_or_else(|| SchemaError::malformed(id, "timeStart after timeEnd"))?,
        ),
        _ => return Err(SchemaError::malformed(id, "timeStart and timeEnd must come together")),
    };
    Ok(ContextRecord {
        location,
        users: kb.objects_of(id, &sc(prop::INVOLVES_USER)).into_iter().collect(),
        object: single_object(kb, id, prop::CONCERNS_OBJECT)?,
        time,
    })
}

fn read_location(kb: &KnowledgeBase, id: &EntityId) -> Result<LocationRecord, SchemaError> {
    let decimal = |p: &str| -> Result<Option<Decimal>, SchemaError> {
        match single_literal(kb, id, p)? {
            None => Ok(None),
            Some(Literal::Decimal(d)) => Ok(Some(d)),
            Some(other) => Err(SchemaError::malformed(id, format!("{p} must be decimal, found {other}"))),
        }
    };
    let point = match (
        decimal(prop::LATITUDE)?,
        decimal(prop::LONGITUDE)?,
        decimal(prop::ALTITUDE)?,
    ) {
        (None, None, None) => None,
        (Some(latitude), Some(longitude), altitude) => Some(Point {
            latitude,
            longitude,
            altitude,
        }),
        _ => return Err(SchemaError::malformed(id, "point needs both latitude and longitude")),
    };
    Ok(LocationRecord {
        point,
        district: single_string(kb, id, prop::IN_DISTRICT)?,
        street: single_string(kb, id, prop::IN_STREET)?,
        building: single_string(kb, id, prop::IN_BUILDING)?,
        floor: single_string(kb, id, prop::ON_FLOOR)?,
        room: single_string(kb, id, prop::IN_ROOM)?,
    })
}

fn text(s: &str) -> Literal {
    Literal::string(s).expect("record strings carry no line breaks")
}

/// Axioms describing `ctx` as the individual `id` (plus a location
/// individual when a location is present).
pub fn context_axioms(id: &EntityId, ctx: &ContextRecord) -> Vec<Axiom> {
    let mut out = vec![Axiom::instance(id.clone(), sc(class::CONTEXT))];
    if let Some(loc) = &ctx.location {
        let lid = location_id_for(id);
        out.push(Axiom::instance(lid.clone(), sc(loc.granularity_class())));
        out.push(Axiom::relation(id.clone(), sc(prop::HAS_LOCATION), lid.clone()));
        if let Some(p) = &loc.point {
            out.push(Axiom::value(lid.clone(), sc(prop::LATITUDE), Literal::Decimal(p.latitude.clone())));
            out.push(Axiom::value(lid.clone(), sc(prop::LONGITUDE), Literal::Decimal(p.longitude.clone())));
            if let Some(alt) = &p.altitude {
                out.push(Axiom::value(lid.clone(), sc(prop::ALTITUDE), Literal::Decimal(alt.clone())));
            }
        }
        for (p, field) in [
            (prop::IN_DISTRICT, &loc.district),
            (prop::IN_STREET, &loc.street),
            (prop::IN_BUILDING, &loc.building),
            (prop::ON_FLOOR, &loc.floor),
            (prop::IN_ROOM, &loc.room),
        ] {
            if let Some(v) = field {
                out.push(Axiom::value(lid.clone(), sc(p), text(v)));
            }
        }
    }
    for u in &ctx.users {
        out.push(Axiom::relation(id.clone(), sc(prop::INVOLVES_USER), u.clone()));
    }
    if let Some(o) = &ctx.object {
        out.push(Axiom::relation(id.clone(), sc(prop::CONCERNS_OBJECT), o.clone()));
    }
    if let Some(t) = &ctx.time {
        out.push(Axiom::value(id.clone(), sc(prop::TIME_START), Literal::Integer(t.start())));
        out.push(Axiom::value(id.clone(), sc(prop::TIME_END), Literal::Integer(t.end())));
    }
    out
}

/// The context attached to `owner` through `hasContext`, if any.
pub fn context_of(kb: &KnowledgeBase, owner: &EntityId) -> Result<Option<ContextRecord>, SchemaError> {
    single_object(kb, owner, prop::HAS_CONTEXT)?
        .map(|c| read_context(kb, &c))
        .transpose()
}

fn reaches_itself(kb: &KnowledgeBase, start: &EntityId) -> bool {
    let has_component = sc(prop::HAS_COMPONENT);
    let mut stack = kb.objects_of(start, &has_component);
    let mut seen = BTreeSet::new();
    while let Some(next) = stack.pop() {
        if &next == start {
            return true;
        }
        if seen.insert(next.clone()) {
            stack.extend(kb.objects_of(&next, &has_component));
        }
    }
    false
}

pub fn hardware_view(kb: &KnowledgeBase, id: &EntityId) -> Result<HardwareRecord, SchemaError> {
    if !kb.is_instance_of(id, &sc(class::HARDWARE)) {
        return Err(SchemaError::NotHardware(id.clone()));
    }
    let kinds: Vec<HardwareKind> = [
        HardwareKind::Composite,
        HardwareKind::Sensor,
        HardwareKind::Actuator,
        HardwareKind::ComputeUnit,
        HardwareKind::PowerSource,
    ]
    .into_iter()
    .filter(|k| kb.is_instance_of(id, &sc(k.class_name())))
    .collect();
    let kind = match kinds.as_slice() {
        [k] => *k,
        [] => return Err(SchemaError::malformed(id, "no concrete hardware class")),
        _ => return Err(SchemaError::malformed(id, format!("conflicting hardware classes {kinds:?}"))),
    };
    let components = kb.objects_of(id, &sc(prop::HAS_COMPONENT));
    match (kind == HardwareKind::Composite, components.is_empty()) {
        (true, true) => return Err(SchemaError::malformed(id, "composite without components")),
        (false, false) => return Err(SchemaError::malformed(id, "only composites have components")),
        _ => {}
    }
    if reaches_itself(kb, id) {
        return Err(SchemaError::malformed(id, "component graph contains a cycle"));
    }
    let functioning = match single_literal(kb, id, prop::IS_FUNCTIONING)? {
        None => true,
        Some(Literal::Boolean(b)) => b,
        Some(other) => return Err(SchemaError::malformed(id, format!("isFunctioning = {other}"))),
    };
    let context = context_of(kb, id)?;
    if let Some(ctx) = &context {
        ctx.validate().map_err(|e| SchemaError::malformed(id, e))?;
    }
    Ok(HardwareRecord {
        id: id.clone(),
        kind,
        capabilities: kb.objects_of(id, &sc(prop::HAS_CAPABILITY)).into_iter().collect(),
        components,
        functioning,
        context,
    })
}

/// Axioms that make [`hardware_view`] return `record`. Components must be
/// asserted separately.
pub fn hardware_axioms(record: &HardwareRecord) -> Vec<Axiom> {
    let id = &record.id;
    let mut out = vec![Axiom::instance(id.clone(), sc(record.kind.class_name()))];
    out.extend(
        record
            .components
            .iter()
            .map(|c| Axiom::relation(id.clone(), sc(prop::HAS_COMPONENT), c.clone())),
    );
    out.extend(
        record
            .capabilities
            .iter()
            .map(|c| Axiom::relation(id.clone(), sc(prop::HAS_CAPABILITY), c.clone())),
    );
    out.push(Axiom::value(
        id.clone(),
        sc(prop::IS_FUNCTIONING),
        Literal::Boolean(record.functioning),
    ));
    if let Some(ctx) = &record.context {
        let cid = context_id_for(id);
        out.push(Axiom::relation(id.clone(), sc(prop::HAS_CONTEXT), cid.clone()));
        out.extend(context_axioms(&cid, ctx));
    }
    // kind order is a valid insertion order
    out.sort_by_key(Axiom::kind);
    out
}

/// Splits a `key=value` entry; the value is read as a literal token when
/// it is one and as plain text otherwise.
fn entry(raw: &str) -> Option<(String, Literal)> {
    let (key, value) = raw.split_once('=')?;
    let lit = Literal::parse_token(value).unwrap_or_else(|_| Literal::String(value.to_string()));
    Some((key.to_string(), lit))
}

fn entries(kb: &KnowledgeBase, id: &EntityId, property: &str) -> Result<BTreeMap<String, Literal>, SchemaError> {
    let mut out = BTreeMap::new();
    for raw in strings(kb, id, property) {
        let (k, v) = entry(&raw).ok_or_else(|| SchemaError::malformed(id, format!("{property} `{raw}` lacks `=`")))?;
        if out.insert(k.clone(), v).is_some() {
            return Err(SchemaError::malformed(id, format!("{property} key `{k}` repeated")));
        }
    }
    Ok(out)
}

pub fn person_view(kb: &KnowledgeBase, id: &EntityId) -> Result<PersonRecord, SchemaError> {
    require_class(kb, id, class::PERSON)?;
    let assisted = kb.is_instance_of(id, &sc(class::ASSISTED));
    let caregiver = kb.is_instance_of(id, &sc(class::CAREGIVER));
    let role = match (assisted, caregiver) {
        (true, false) => Role::Assisted,
        (false, true) => Role::Caregiver,
        (false, false) => return Err(SchemaError::malformed(id, "person has no role")),
        (true, true) => return Err(SchemaError::malformed(id, "person is both assisted and caregiver")),
    };
    Ok(PersonRecord {
        id: id.clone(),
        role,
        profile: entries(kb, id, prop::PROFILE_ENTRY)?,
        preferences: entries(kb, id, prop::PREFERENCE_ENTRY)?,
        assistance_needs: strings(kb, id, prop::ASSISTANCE_NEED),
        aid_types: strings(kb, id, prop::AID_TYPE),
    })
}

pub fn person_axioms(record: &PersonRecord) -> Vec<Axiom> {
    let id = &record.id;
    let mut out = vec![Axiom::instance(id.clone(), sc(record.role.class_name()))];
    for (p, map) in [(prop::PROFILE_ENTRY, &record.profile), (prop::PREFERENCE_ENTRY, &record.preferences)] {
        out.extend(map.iter().map(|(k, v)| Axiom::value(id.clone(), sc(p), text(&format!("{k}={v}")))));
    }
    for (p, set) in [(prop::ASSISTANCE_NEED, &record.assistance_needs), (prop::AID_TYPE, &record.aid_types)] {
        out.extend(set.iter().map(|v| Axiom::value(id.clone(), sc(p), text(v))));
    }
    out
}

pub fn agent_view(kb: &KnowledgeBase, id: &EntityId) -> Result<AgentRecord, SchemaError> {
    require_class(kb, id, class::AGENT)?;
    Ok(AgentRecord {
        id: id.clone(),
        goals: kb.objects_of(id, &sc(prop::HAS_GOAL)),
        assists: kb.objects_of(id, &sc(prop::ASSISTS)),
    })
}

pub fn relation_view(kb: &KnowledgeBase, id: &EntityId) -> Result<SocialRelation, SchemaError> {
    require_class(kb, id, class::SOCIAL_RELATION)?;
    let from = single_object(kb, id, prop::RELATION_FROM)?
        .ok_or_else(|| SchemaError::malformed(id, "relation without relationFrom"))?;
    let to = single_object(kb, id, prop::RELATES_TO)?
        .ok_or_else(|| SchemaError::malformed(id, "relation without relatesTo"))?;
    let quality = single_string(kb, id, prop::QUALITY)?
        .ok_or_else(|| SchemaError::malformed(id, "relation without quality"))?;
    let functions = strings(kb, id, prop::FUNCTION)
        .iter()
        .map(|f| f.parse::<RelationFunction>())
        .collect::<Result<BTreeSet<_>, _>>()
        .map_err(|e| SchemaError::malformed(id, e))?;
    if functions.is_empty() {
        return Err(SchemaError::malformed(id, "relation without function"));
    }
    Ok(SocialRelation {
        id: id.clone(),
        from,
        to,
        quality: RelationQuality::parse(&quality),
        functions,
    })
}

pub fn relation_axioms(rel: &SocialRelation) -> Vec<Axiom> {
    let id = &rel.id;
    let mut out = vec![
        Axiom::instance(id.clone(), sc(class::SOCIAL_RELATION)),
        Axiom::relation(id.clone(), sc(prop::RELATION_FROM), rel.from.clone()),
        Axiom::relation(id.clone(), sc(prop::RELATES_TO), rel.to.clone()),
        Axiom::value(id.clone(), sc(prop::QUALITY), text(rel.quality.as_str())),
    ];
    out.extend(
        rel.functions
            .iter()
            .map(|f| Axiom::value(id.clone(), sc(prop::FUNCTION), text(f.as_str()))),
    );
    out
}

/// Relations having `user` at either end, sorted by relation id.
pub fn relations_of(kb: &KnowledgeBase, user: &EntityId) -> Result<Vec<SocialRelation>, SchemaError> {
    let ids: BTreeSet<EntityId> = kb
        .subjects_of(&sc(prop::RELATION_FROM), user)
        .into_iter()
        .chain(kb.subjects_of(&sc(prop::RELATES_TO), user))
        .collect();
    ids.iter().map(|r| relation_view(kb, r)).collect()
}

fn instances(kb: &KnowledgeBase, class_name: &str) -> Vec<EntityId> {
    kb.instances_of(&sc(class_name), crate::kb::InstanceMode::Inferred)
        .unwrap_or_default()
}

/// Checks every hardware, person, agent and relation record of the world.
pub fn validate_world(kb: &KnowledgeBase) -> Vec<SchemaError> {
    if kb.kind_of(&sc(class::HARDWARE)).is_none() {
        return vec![SchemaError::Kb(KbError::UndeclaredEntity {
            id: sc(class::HARDWARE),
            expected: crate::kb::EntityKind::Class,
        })];
    }
    let mut problems = Vec::new();
    for id in instances(kb, class::HARDWARE) {
        problems.extend(hardware_view(kb, &id).err());
    }
    for id in instances(kb, class::PERSON) {
        problems.extend(person_view(kb, &id).err());
    }
    for id in instances(kb, class::SOCIAL_RELATION) {
        problems.extend(relation_view(kb, &id).err());
    }
    for id in instances(kb, class::AGENT) {
        if let Err(e) = agent_view(kb, &id) {
            problems.push(e);
        }
    }
    problems
}
