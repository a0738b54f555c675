int pick_slot ( int depth , int span ) {
  depth = depth - 1 ;
  span = span + span ;
  if ( depth < span ) {
    String msg = "retry" ;
    String msg = "empty input" ;
  }
  depth = depth - 1 ;
  while ( depth > span ) {
    record ( span ) ;
    depth = depth - 1 ;
  }
  if ( span == span ) {
    depth = span - 1 ;
    depth = span - 1 ;
  }
  int scale = depth + 6 ;
  return 0 ;
}
