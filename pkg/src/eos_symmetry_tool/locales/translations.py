# -*- coding: utf-8 -*-
"""
Message catalogue for the EOS symmetry toolkit
Diagnostics and console text, keyed by message code
"""

MESSAGES = {
    # Structural diagnostics (Eos.validate)
    'UntypedPlace': 'system place {} has no type',
    'UnknownObjectNet': 'place {} is typed by undeclared object net {}',
    'SystemNetAsType': 'place {} is typed by the system net itself',
    'DuplicateNode': 'node {} is declared in both {} and {}',
    'ReservedName': 'name {} is reserved',
    'UnknownTransition': 'event {} references undeclared system transition {}',
    'UnknownPlace': 'idle event {} references undeclared system place {}',
    'UnknownEventNet': 'event {} synchronizes with undeclared object net {}',
    'UnknownObjectTransition': 'event {}: {} is not a transition of {}',
    'IdleTypeMismatch': 'idle event {} synchronizes with {} but its place is typed {}',
    'IdleWithoutStep': 'idle event {} has no step for its type {}',
    'UnknownLabelNode': 'label on undeclared transition {} of {}',
    'UnknownLabelNet': 'label of {} names undeclared object net {}',
    'UnknownMarkingPlace': 'marking uses undeclared system place {}',
    'MarkingTypeMismatch': 'addend {} uses places outside object net {}',

    # Parse diagnostics (model_parser)
    'MalformedLine': 'cannot read line: {}',
    'MalformedMultiset': 'malformed multiset: {}',
    'MalformedMarking': 'malformed nested marking: {}',
    'MalformedEvent': 'malformed event: {}',
    'DuplicateDeclaration': '{} is already declared',
    'UnknownId': 'unknown identifier {}',
    'UnknownDirective': 'unknown directive {}',
    'MissingEnd': 'block opened here is not closed with end',
    'UnexpectedEnd': 'end without an open block',
    'MissingSystemNet': 'model has no systemnet block',
    'LabelBlowup': 'label expansion gives too many events: {}',

    # Console text
    'valid': 'valid',
    'conservative': 'conservative: {}',
    'pt_like': 'pt-like: {}',
    'group_order': 'group order: {}',
    'group_truncated': 'truncated: {}',
    'generators': 'generators:',
    'elements': 'elements:',
    'no_such_event': 'no event matches {!r}; candidates: {}',
    'ambiguous_event': '{!r} matches several events: {}',
    'no_mode': 'event {} has no mode with index {} (modes: {})',
    'not_enabled': 'event {} is not enabled',
    'explore_summary': 'states: {} edges: {} truncated: {} reduction: {} group order: {}',
    'verify_summary': 'full states: {} reduced states: {} violations: {}',
    'violation': 'violation ({}): {}',
    'strict_truncated': 'exploration was truncated by bounds',
}
