# app/services/environment/toy_world.py

import logging
from typing import Callable, Dict, List, Optional

from pydantic import BaseModel, ConfigDict

from app.schemas.trace import EnvDescription, EnvStep
from app.services.environment.base_env import EnvAdapter

logger = logging.getLogger(__name__)

OBJECTIVE = "Your task is to unlock and open the pantry door. The key is somewhere in the kitchen."
ACTION_TEMPLATES = ["go OBJ", "open OBJ", "pick up OBJ", "use OBJ on OBJ", "look around", "inventory"]
UNKNOWN_ACTION = "No known action matches that input."
GOAL_REWARD = 1.0

CANONICAL_SOLUTION = [
    "go kitchen",
    "open drawer",
    "pick up key",
    "go hallway",
    "use key on pantry door",
    "open pantry door",
]


class WorldState(BaseModel):
    model_config = ConfigDict(frozen=True)

    room: str = "hallway"
    kitchen_visited: bool = False
    drawer_open: bool = False
    key_held: bool = False
    door_unlocked: bool = False
    door_open: bool = False
    score: float = 0.0

    @property
    def done(self) -> bool:
        return self.score >= GOAL_REWARD


def _prior_description() -> str:
    templates = ", ".join(repr(template) for template in ACTION_TEMPLATES)
    return (
        "an agent situated in textual task environment. Generate a sequence of actions to meet the objective.\n\n"
        "Do not make up new actions or objects.\n\n"
        "DO NOT TAKE ANY ACTION ON ANY OBJECT that is NOT IN ACCESSIBLE OBJECTS in CURRENT STATE\n\n"
        "Here are the following set of allowed actions. where OBJ should be replaced by any object "
        "that you can find in your current state.\n\n"
        f"[{templates}]"
    )


class KeyDoorWorld(EnvAdapter):
    """Three rooms: hallway, kitchen and pantry.

    The pantry door in the hallway is locked; its key sits in the kitchen drawer.
    Rewards: first kitchen entry 0.25, taking the key 0.25, opening the unlocked
    pantry door 0.5. The task is done at a cumulative 1.0.
    """

    def __init__(self):
        self.state = WorldState()
        self._handlers: Dict[str, Callable[[], Optional[EnvStep]]] = {
            "look around": lambda: EnvStep(observation=self.look()),
            "inventory": lambda: EnvStep(observation=self.inventory()),
            "open drawer": self._open_drawer,
            "open pantry door": self._open_pantry_door,
            "pick up key": self._pick_up_key,
            "use key on pantry door": self._use_key,
        }

    # ---- EnvAdapter -------------------------------------------------------

    def reset(self) -> str:
        self.state = WorldState()
        return self.look()

    def step(self, action: str) -> EnvStep:
        command = " ".join(action.split()).lower()
        if self.state.done:
            return EnvStep(observation="The task is already complete.", done=True)
        if command.startswith("go "):
            result = self._go(command[3:])
        else:
            handler = self._handlers.get(command)
            result = handler() if handler else None
        if result is None:
            return EnvStep(observation=UNKNOWN_ACTION, valid=False, done=self.state.done)
        return result.model_copy(update={"done": self.state.done})

    def describe(self) -> EnvDescription:
        return EnvDescription(objective=OBJECTIVE, prior_description=_prior_description())

    def accessible_objects(self) -> List[str]:
        state = self.state
        if state.room == "hallway":
            objects = ["agent", "picture", "kitchen", "pantry door"]
            if state.door_open:
                objects.append("pantry")
        elif state.room == "kitchen":
            objects = ["agent", "drawer", "hallway"]
            if state.drawer_open and not state.key_held:
                objects.append("key")
        else:
            objects = ["agent", "jars", "hallway"]
        if state.key_held:
            objects.append("key")
        return objects

    def action_templates(self) -> List[str]:
        return list(ACTION_TEMPLATES)

    def inventory(self) -> str:
        items = "a key" if self.state.key_held else "nothing"
        return f"In your inventory, you see:\n\t{items}"

    def look(self) -> str:
        # every flag that changes what an action does shows up in some room's text
        state = self.state
        if state.room == "hallway":
            if not state.kitchen_visited:
                kitchen = "A door to the kitchen (that is closed)"
            else:
                kitchen = f"A door to the kitchen (that is open)\n\tThrough it, {self._drawer_text()}"
            return (
                "This room is called the hallway. In it, you see:\n\tthe agent\n\ta picture\n"
                f"You also see:\n\t{kitchen}\n"
                f"\tA door to the pantry (that is {self._pantry_door_text()})"
            )
        if state.room == "kitchen":
            return (
                "This room is called the kitchen. In it, you see:\n\tthe agent\n"
                f"\t{self._drawer_text()}\nYou also see:\n\tA door to the hallway (that is open)\n"
                f"\tThrough it, a door to the pantry (that is {self._pantry_door_text()})"
            )
        return (
            "This room is called the pantry. In it, you see:\n\tthe agent\n\tshelves of jars\n"
            "You also see:\n\tA door to the hallway (that is open)"
        )

    def _drawer_text(self) -> str:
        if not self.state.drawer_open:
            return "a drawer (that is closed)"
        if self.state.key_held:
            return "a drawer (that is open and empty)"
        return "a drawer (that is open, containing a key)"

    def _pantry_door_text(self) -> str:
        if self.state.door_open:
            return "open"
        return "closed" if self.state.door_unlocked else "locked"

    # ---- search support -----------------------------------------------------

    def snapshot(self) -> WorldState:
        return self.state

    def restore(self, state: WorldState) -> None:
        self.state = state

    # ---- rules --------------------------------------------------------------

    def _reward(self, amount: float, **changes) -> float:
        self.state = self.state.model_copy(update={**changes, "score": self.state.score + amount})
        return amount

    def _go(self, target: str) -> Optional[EnvStep]:
        room = self.state.room
        if room == "hallway" and target == "kitchen":
            reward = 0.0 if self.state.kitchen_visited else 0.25
            self._reward(reward, room="kitchen", kitchen_visited=True)
            return EnvStep(observation=self.look(), raw_reward=reward)
        if room == "hallway" and target == "pantry":
            if not self.state.door_open:
                return EnvStep(observation="The door to the pantry is not open.")
            self._reward(0.0, room="pantry")
            return EnvStep(observation=self.look())
        if room in ("kitchen", "pantry") and target == "hallway":
            self._reward(0.0, room="hallway")
            return EnvStep(observation=self.look())
        return None

    def _open_drawer(self) -> Optional[EnvStep]:
        if self.state.room != "kitchen":
            return None
        if self.state.drawer_open:
            return EnvStep(observation="The drawer is already open.")
        self._reward(0.0, drawer_open=True)
        return EnvStep(observation="The drawer is now open.")

    def _pick_up_key(self) -> Optional[EnvStep]:
        state = self.state
        if state.room != "kitchen" or not state.drawer_open or state.key_held:
            return None
        reward = self._reward(0.25, key_held=True)
        return EnvStep(observation="You move the key to the inventory.", raw_reward=reward)

    def _use_key(self) -> Optional[EnvStep]:
        state = self.state
        if state.room != "hallway" or not state.key_held:
            return None
        if state.door_unlocked:
            return EnvStep(observation="The pantry door is already unlocked.")
        self._reward(0.0, door_unlocked=True)
        return EnvStep(observation="You unlock the pantry door with the key.")

    def _open_pantry_door(self) -> Optional[EnvStep]:
        state = self.state
        if state.room != "hallway":
            return None
        if not state.door_unlocked:
            return EnvStep(observation="The pantry door is locked.")
        if state.door_open:
            return EnvStep(observation="The pantry door is already open.")
        reward = self._reward(0.5, door_open=True)
        return EnvStep(observation="The pantry door is now open.", raw_reward=reward)


def toy_world() -> KeyDoorWorld:
    return KeyDoorWorld()
