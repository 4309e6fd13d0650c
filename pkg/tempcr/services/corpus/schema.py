"""Pydantic models describing one JSON-lines corpus record."""

from __future__ import annotations

from typing import Any, List, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class TokenRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t: str = Field(..., min_length=1)
    pos: str = Field(..., min_length=1)


class EntityRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(..., min_length=1)
    kind: Literal["EVENT", "TIMEX3"]
    start: int = Field(..., ge=0)
    end: int = Field(..., ge=1)

    @model_validator(mode="after")
    def check_span(self) -> "EntityRecord":
        if self.start >= self.end:
            raise ValueError(f"entity '{self.id}' has empty span [{self.start}, {self.end})")
        return self


class RelationRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    source: str = Field(..., min_length=1)
    target: str = Field(..., min_length=1)
    label: Literal["CONTAINS"] = "CONTAINS"


class DocumentRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(..., min_length=1)
    tokens: List[TokenRecord]
    entities: List[EntityRecord] = Field(default_factory=list)
    relations: List[RelationRecord] = Field(default_factory=list)

    @model_validator(mode="before")
    def strip_identifiers(cls, values: Any) -> Any:
        if isinstance(values, dict) and isinstance(values.get("id"), str):
            values["id"] = values["id"].strip()
        return values


__all__ = ["DocumentRecord", "EntityRecord", "RelationRecord", "TokenRecord"]
